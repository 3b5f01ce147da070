//! Single-logical-qubit stabilizer codes and the code families used here.

mod families;
mod surface;
mod tree;

use std::fmt::Write as _;

use serde::Serialize;

pub use families::{five_qubit, qpc, steane, STEANE_FACES};
pub use surface::{rotated_surface, standard_surface, RotatedPlaquettes};
pub use tree::{tree, TreeLayout};

use crate::error::{Error, Result};
use crate::gf2::SymplecticBasis;
use crate::pauli::{Letter, Pauli};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Layout {
    None,
    /// Row/column (1-based) of every site; QPC and rotated surface.
    Grid { rows: usize, cols: usize, coords: Vec<(usize, usize)> },
    /// (layer, column) of every site on the standard surface lattice.
    Layered { r: usize, m: usize, coords: Vec<(usize, usize)> },
    Tree(TreeLayout),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerCode {
    family: String,
    n: usize,
    generators: Vec<Pauli>,
    logical_x: Pauli,
    logical_z: Pauli,
    layout: Layout,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CosetClass {
    Stabilizer,
    LogicalX,
    LogicalY,
    LogicalZ,
    Outside,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CodeReport {
    pub violations: Vec<String>,
}

impl CodeReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The code left after measuring one site, plus the map for operators that
/// commute with that measurement.
#[derive(Clone, Debug)]
pub struct SiteReduction {
    pub code: StabilizerCode,
    site: usize,
    measured: Pauli,
    survivor: Option<Pauli>,
}

impl SiteReduction {
    pub fn site(&self) -> usize {
        self.site
    }

    /// Carries an operator of the parent code to the reduced code. Operators
    /// that anticommute with the measurement are first multiplied by the
    /// consumed generator.
    pub fn map(&self, op: &Pauli) -> Result<Pauli> {
        let mut q = op.clone();
        if !q.commutes_unchecked(&self.measured) {
            match &self.survivor {
                Some(s) => q.mul_assign_unchecked(s),
                None => return Err(Error::InvalidScheme(format!("{op} anticommutes with {}", self.measured))),
            }
        }
        if q.letter(self.site) != Letter::I {
            q.mul_assign_unchecked(&self.measured);
        }
        debug_assert_eq!(q.letter(self.site), Letter::I);
        Ok(q.remove_sites(&[self.site]))
    }
}

impl StabilizerCode {
    pub fn new(family: impl Into<String>, generators: Vec<Pauli>, logical_x: Pauli, logical_z: Pauli) -> Result<StabilizerCode> {
        let n = logical_x.n();
        let code = StabilizerCode { family: family.into(), n, generators, logical_x, logical_z, layout: Layout::None };
        code.validate()?;
        Ok(code)
    }

    pub(crate) fn with_layout(mut self, layout: Layout) -> StabilizerCode {
        self.layout = layout;
        self
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Pauli] {
        &self.generators
    }

    pub fn logical_x(&self) -> &Pauli {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &Pauli {
        &self.logical_z
    }

    /// `i X̄ Z̄`, Hermitian.
    pub fn logical_y(&self) -> Pauli {
        let xz = self.logical_x.multiply(&self.logical_z).expect("same n");
        Pauli::from_words(self.n, xz.x_words(), xz.z_words(), xz.phase() + 1)
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn tree_layout(&self) -> Option<&TreeLayout> {
        match &self.layout {
            Layout::Tree(t) => Some(t),
            _ => None,
        }
    }

    pub fn check(&self) -> CodeReport {
        check_code(self)
    }

    pub fn validate(&self) -> Result<()> {
        let r = check_code(self);
        if r.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidCode(format!("{}: {}", self.family, r.violations.join("; "))))
        }
    }

    pub fn stabilizer_basis(&self) -> SymplecticBasis {
        SymplecticBasis::from_ops(self.n, &self.generators).expect("validated dimensions")
    }

    pub fn coset_class(&self, op: &Pauli) -> CosetClass {
        coset_class(self, op)
    }

    /// Measures `letter` on `site` and removes the site.
    pub fn measured_out(&self, site: usize, letter: Letter) -> Result<SiteReduction> {
        if site >= self.n || letter == Letter::I {
            return Err(Error::InvalidParams(format!("cannot measure {letter} on site {site}")));
        }
        let measured = Pauli::single(self.n, site, letter);
        let mut gens = self.generators.clone();
        let survivor_idx = gens.iter().position(|g| !g.commutes_unchecked(&measured));
        let survivor = survivor_idx.map(|k| gens[k].clone());
        if let (Some(k), Some(s)) = (survivor_idx, &survivor) {
            for (i, g) in gens.iter_mut().enumerate() {
                if i != k && !g.commutes_unchecked(&measured) {
                    g.mul_assign_unchecked(s);
                }
            }
            gens.remove(k);
        } else {
            // the site's letter is fixed by the stabilizer; one generator becomes trivial
            return Err(Error::Unsupported(format!("site {site} carries no anticommuting generator")));
        }
        let red = SiteReduction {
            code: self.clone(),
            site,
            measured: measured.clone(),
            survivor: survivor.clone(),
        };
        let mut new_gens = Vec::with_capacity(gens.len());
        for g in gens {
            new_gens.push(red.map(&g)?.with_sign(1));
        }
        let lx = red.map(&self.logical_x)?.with_sign(1);
        let lz = red.map(&self.logical_z)?.with_sign(1);
        let layout = match &self.layout {
            Layout::Tree(t) => Layout::Tree(t.without(site)),
            _ => Layout::None,
        };
        let code = StabilizerCode::new(format!("{}-{}{}", self.family, letter, site), new_gens, lx, lz)?.with_layout(layout);
        Ok(SiteReduction { code, site, measured, survivor })
    }

    /// Plain-text serialization: family, n, generators, logical reps, layout.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "code {}", self.family);
        let _ = writeln!(s, "n {}", self.n);
        for g in &self.generators {
            let _ = writeln!(s, "gen {g}");
        }
        let _ = writeln!(s, "lx {}", self.logical_x);
        let _ = writeln!(s, "lz {}", self.logical_z);
        match &self.layout {
            Layout::Grid { coords, .. } | Layout::Layered { coords, .. } => {
                for (j, (a, b)) in coords.iter().enumerate() {
                    let _ = writeln!(s, "coord {j} {a} {b}");
                }
            }
            Layout::Tree(t) => {
                for (v, p) in t.parent.iter().enumerate() {
                    if let Some(p) = p {
                        let _ = writeln!(s, "parent {v} {p}");
                    }
                }
            }
            Layout::None => {}
        }
        s
    }

    /// Parses [`StabilizerCode::to_text`] output; layout lines are accepted and ignored.
    pub fn from_text(text: &str) -> Result<StabilizerCode> {
        let mut family = String::from("custom");
        let mut n = None;
        let mut gens = Vec::new();
        let (mut lx, mut lz) = (None, None);
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match key {
                "code" => family = rest.to_string(),
                "n" => n = Some(rest.parse::<usize>().map_err(|_| Error::Format(format!("line {}: bad n", ln + 1)))?),
                "gen" => gens.push(rest.parse::<Pauli>()?),
                "lx" => lx = Some(rest.parse::<Pauli>()?),
                "lz" => lz = Some(rest.parse::<Pauli>()?),
                "coord" | "parent" => {}
                other => return Err(Error::Format(format!("line {}: unknown key {other:?}", ln + 1))),
            }
        }
        let lx = lx.ok_or_else(|| Error::Format("missing lx".into()))?;
        let lz = lz.ok_or_else(|| Error::Format("missing lz".into()))?;
        if let Some(n) = n {
            if n != lx.n() {
                return Err(Error::Format(format!("n = {n} but operators act on {} qubits", lx.n())));
            }
        }
        StabilizerCode::new(family, gens, lx, lz)
    }
}

pub fn check_code(code: &StabilizerCode) -> CodeReport {
    let mut v = Vec::new();
    let n = code.n;
    if n == 0 {
        v.push("zero qubits".to_string());
        return CodeReport { violations: v };
    }
    let ops = code.generators.iter().chain([&code.logical_x, &code.logical_z]);
    for p in ops {
        if p.n() != n {
            v.push(format!("{p} acts on {} qubits, expected {n}", p.n()));
        }
    }
    if !v.is_empty() {
        return CodeReport { violations: v };
    }
    if code.generators.len() + 1 != n {
        v.push(format!("{} generators for {n} qubits", code.generators.len()));
    }
    for g in &code.generators {
        if !g.is_hermitian() {
            v.push(format!("generator {g} is not Hermitian"));
        }
    }
    for (i, a) in code.generators.iter().enumerate() {
        for b in &code.generators[i + 1..] {
            if !a.commutes_unchecked(b) {
                v.push(format!("generators {a} and {b} anticommute"));
            }
        }
    }
    let basis = code.stabilizer_basis();
    if basis.rank() != code.generators.len() {
        v.push(format!("generators have rank {} < {}", basis.rank(), code.generators.len()));
    }
    for (name, l) in [("X", &code.logical_x), ("Z", &code.logical_z)] {
        if !l.is_hermitian() {
            v.push(format!("logical {name} {l} is not Hermitian"));
        }
        if let Some(g) = code.generators.iter().find(|g| !g.commutes_unchecked(l)) {
            v.push(format!("logical {name} {l} anticommutes with {g}"));
        }
        if basis.contains(l) {
            v.push(format!("logical {name} {l} is a stabilizer"));
        }
    }
    if code.logical_x.commutes_unchecked(&code.logical_z) {
        v.push("logical X and Z commute".to_string());
    }
    CodeReport { violations: v }
}

pub fn coset_class(code: &StabilizerCode, op: &Pauli) -> CosetClass {
    if op.n() != code.n || code.generators.iter().any(|g| !g.commutes_unchecked(op)) {
        return CosetClass::Outside;
    }
    let basis = code.stabilizer_basis();
    let s = op.stripped();
    let x = s.stripped_product(&code.logical_x).expect("same n");
    let z = s.stripped_product(&code.logical_z).expect("same n");
    let y = x.stripped_product(&code.logical_z).expect("same n");
    if basis.contains(&s) {
        CosetClass::Stabilizer
    } else if basis.contains(&x) {
        CosetClass::LogicalX
    } else if basis.contains(&z) {
        CosetClass::LogicalZ
    } else if basis.contains(&y) {
        CosetClass::LogicalY
    } else {
        CosetClass::Outside
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Pauli {
        s.parse().unwrap()
    }

    #[test]
    fn qpc22_cosets() {
        let c = qpc(2, 2).unwrap();
        for z in ["ZIZI", "ZIIZ", "IZZI", "IZIZ"] {
            assert_eq!(c.coset_class(&p(z)), CosetClass::LogicalZ, "{z}");
        }
        assert_eq!(c.coset_class(&p("IIII")), CosetClass::Stabilizer);
        assert_eq!(c.coset_class(&p("XXII")), CosetClass::LogicalX);
        assert_eq!(c.coset_class(&p("ZIII")), CosetClass::Outside);
    }

    #[test]
    fn report_lists_violations() {
        let c = StabilizerCode {
            family: "bad".into(),
            n: 2,
            generators: vec![p("XX")],
            logical_x: p("XI"),
            logical_z: p("ZI"),
            layout: Layout::None,
        };
        let r = c.check();
        assert!(!r.is_valid());
        assert!(r.violations.iter().any(|v| v.contains("anticommutes")));
        assert!(StabilizerCode::new("empty", vec![], Pauli::identity(0), Pauli::identity(0)).is_err());
    }

    #[test]
    fn text_round_trip() {
        let c = steane();
        let back = StabilizerCode::from_text(&c.to_text()).unwrap();
        assert_eq!(back.generators(), c.generators());
        assert_eq!(back.logical_x(), c.logical_x());
        assert!(StabilizerCode::from_text("n 2\ngen XX\n").is_err());
    }

    #[test]
    fn logical_y_is_hermitian() {
        let c = five_qubit();
        let y = c.logical_y();
        assert!(y.is_hermitian());
        assert_eq!(c.coset_class(&y), CosetClass::LogicalY);
    }

    #[test]
    fn measuring_out_a_site() {
        let c = qpc(2, 2).unwrap();
        let red = c.measured_out(0, Letter::X).unwrap();
        assert_eq!(red.code.n(), 3);
        assert!(red.code.check().is_valid());
    }
}

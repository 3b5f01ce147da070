//! Logical-BM schemes.
//!
//! An adaptive [`Scheme`] is kept in normal form: a measurement order over the
//! sites of the effective code, one partial-BM basis per position (the last
//! one advisory), and one pair of logical representatives per position that
//! fixes what is measured after the first successful BM. A [`StaticScheme`]
//! is just a basis per site. Both run on a [`Target`]: the code as built plus
//! any fixed measurements made before the schedule starts (the tree root).

mod build;
mod statics;

use std::fmt::Write as _;

use crate::codes::{CosetClass, SiteReduction, StabilizerCode};
use crate::error::{Error, Result};
use crate::gf2::SymplecticBasis;
use crate::pauli::{Letter, Pauli};

pub use build::{build_optimal, css_logical_pair, sweep_candidates, Family};
pub use statics::{build_static, standard_string, wave_string, wz_weight, StaticKind};

/// A fixed single-qubit BM basis applied before the schedule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PreStep {
    pub site: usize,
    pub letter: Letter,
}

#[derive(Clone, Debug)]
pub struct Target {
    parent: StabilizerCode,
    pre_steps: Vec<PreStep>,
    reductions: Vec<SiteReduction>,
    site_map: Vec<usize>,
}

impl Target {
    pub fn plain(code: StabilizerCode) -> Target {
        let site_map = (0..code.n()).collect();
        Target { parent: code, pre_steps: Vec::new(), reductions: Vec::new(), site_map }
    }

    /// Applies `pre_steps` (sites of `parent`) in order.
    pub fn new(parent: StabilizerCode, pre_steps: Vec<PreStep>) -> Result<Target> {
        let mut remaining: Vec<usize> = (0..parent.n()).collect();
        let mut reductions: Vec<SiteReduction> = Vec::new();
        for p in &pre_steps {
            let idx = remaining
                .iter()
                .position(|&s| s == p.site)
                .ok_or_else(|| Error::InvalidScheme(format!("pre-step site {} is not available", p.site)))?;
            let current = reductions.last().map(|r| &r.code).unwrap_or(&parent);
            reductions.push(current.measured_out(idx, p.letter)?);
            remaining.remove(idx);
        }
        Ok(Target { parent, pre_steps, reductions, site_map: remaining })
    }

    pub fn parent(&self) -> &StabilizerCode {
        &self.parent
    }

    /// Single-code picture after the pre-steps.
    pub fn code(&self) -> &StabilizerCode {
        self.reductions.last().map(|r| &r.code).unwrap_or(&self.parent)
    }

    pub fn pre_steps(&self) -> &[PreStep] {
        &self.pre_steps
    }

    /// Parent site of each effective site.
    pub fn site_map(&self) -> &[usize] {
        &self.site_map
    }

    pub fn n(&self) -> usize {
        self.site_map.len()
    }

    /// Carries an operator on the parent code to the effective code.
    pub fn reduce_op(&self, op: &Pauli) -> Result<Pauli> {
        let mut q = op.clone();
        for r in &self.reductions {
            q = r.map(&q)?;
        }
        Ok(q)
    }
}

#[derive(Clone, Debug)]
pub struct Scheme {
    id: String,
    target: Target,
    order: Vec<usize>,
    bases: Vec<Letter>,
    logicals: Vec<(Pauli, Pauli)>,
}

fn check_order(order: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(Error::InvalidScheme(format!("order has {} entries for {n} sites", order.len())));
    }
    for &s in order {
        if s >= n || seen[s] {
            return Err(Error::InvalidScheme(format!("order is not a permutation of 0..{n}")));
        }
        seen[s] = true;
    }
    Ok(())
}

impl Scheme {
    pub fn new(
        id: impl Into<String>,
        target: Target,
        order: Vec<usize>,
        bases: Vec<Letter>,
        logicals: Vec<(Pauli, Pauli)>,
    ) -> Result<Scheme> {
        let n = target.n();
        check_order(&order, n)?;
        if bases.len() != n || bases.contains(&Letter::I) {
            return Err(Error::InvalidScheme(format!("need {n} non-identity bases, got {:?}", bases)));
        }
        if logicals.len() != n {
            return Err(Error::InvalidScheme(format!("need {n} logical pairs, got {}", logicals.len())));
        }
        for (a, b) in &logicals {
            if a.n() != n || b.n() != n {
                return Err(Error::Dimension(a.n().max(b.n()), n));
            }
            if !a.is_hermitian() || !b.is_hermitian() {
                return Err(Error::NonHermitian(format!("{a} / {b}")));
            }
        }
        Ok(Scheme { id: id.into(), target, order, bases, logicals })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn target(&self) -> &Target {
        &self.target
    }

    pub fn code(&self) -> &StabilizerCode {
        self.target.code()
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn bases(&self) -> &[Letter] {
        &self.bases
    }

    pub fn logicals(&self) -> &[(Pauli, Pauli)] {
        &self.logicals
    }

    /// `b_j` as an operator on the effective code.
    pub fn basis_op(&self, j: usize) -> Pauli {
        Pauli::single(self.n(), self.order[j], self.bases[j])
    }

    /// Basis used at position `t` after the first success at `j < t`: the
    /// non-identity letter of `(X̄_j, Z̄_j)` on that site, else `b_t`.
    pub fn completion_letter(&self, j: usize, t: usize) -> Letter {
        let s = self.order[t];
        let (u, v) = (self.logicals[j].0.letter(s), self.logicals[j].1.letter(s));
        if u != Letter::I {
            u
        } else if v != Letter::I {
            v
        } else {
            self.bases[t]
        }
    }

    /// Coset violations among the stored logical pairs.
    pub fn logical_violations(&self) -> Vec<String> {
        let code = self.code();
        let mut out = Vec::new();
        for (j, (x, z)) in self.logicals.iter().enumerate() {
            if code.coset_class(x) != CosetClass::LogicalX {
                out.push(format!("X̄ at position {j} ({x}) is {:?}", code.coset_class(x)));
            }
            if code.coset_class(z) != CosetClass::LogicalZ {
                out.push(format!("Z̄ at position {j} ({z}) is {:?}", code.coset_class(z)));
            }
        }
        out
    }

    pub fn with_basis(&self, j: usize, letter: Letter) -> Result<Scheme> {
        let mut bases = self.bases.clone();
        *bases.get_mut(j).ok_or_else(|| Error::InvalidParams(format!("no position {j}")))? = letter;
        Scheme::new(format!("{}-mut{j}{letter}", self.id), self.target.clone(), self.order.clone(), bases, self.logicals.clone())
    }
}

#[derive(Clone, Debug)]
pub struct StaticScheme {
    id: String,
    target: Target,
    bases: Vec<Letter>,
}

impl StaticScheme {
    pub fn new(id: impl Into<String>, target: Target, bases: Vec<Letter>) -> Result<StaticScheme> {
        if bases.len() != target.n() || bases.contains(&Letter::I) {
            return Err(Error::InvalidScheme(format!("need {} non-identity bases", target.n())));
        }
        Ok(StaticScheme { id: id.into(), target, bases })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn target(&self) -> &Target {
        &self.target
    }

    pub fn code(&self) -> &StabilizerCode {
        self.target.code()
    }

    pub fn n(&self) -> usize {
        self.bases.len()
    }

    /// Basis per effective site.
    pub fn bases(&self) -> &[Letter] {
        &self.bases
    }

    pub fn weight_of(&self, letter: Letter) -> usize {
        self.bases.iter().filter(|&&b| b == letter).count()
    }
}

#[derive(Clone, Debug)]
pub enum AnyScheme {
    Adaptive(Scheme),
    Static(StaticScheme),
}

impl AnyScheme {
    pub fn id(&self) -> &str {
        match self {
            AnyScheme::Adaptive(s) => s.id(),
            AnyScheme::Static(s) => s.id(),
        }
    }

    pub fn target(&self) -> &Target {
        match self {
            AnyScheme::Adaptive(s) => s.target(),
            AnyScheme::Static(s) => s.target(),
        }
    }

    pub fn code(&self) -> &StabilizerCode {
        self.target().code()
    }

    pub fn n(&self) -> usize {
        self.target().n()
    }

    pub fn is_adaptive(&self) -> bool {
        matches!(self, AnyScheme::Adaptive(_))
    }

    /// Measurement order; sites in index order for static schemes.
    pub fn order(&self) -> Vec<usize> {
        match self {
            AnyScheme::Adaptive(s) => s.order().to_vec(),
            AnyScheme::Static(s) => (0..s.n()).collect(),
        }
    }

    /// Failure basis at position `t` of [`AnyScheme::order`].
    pub fn basis_at(&self, t: usize) -> Letter {
        match self {
            AnyScheme::Adaptive(s) => s.bases()[t],
            AnyScheme::Static(s) => s.bases()[t],
        }
    }
}

impl From<Scheme> for AnyScheme {
    fn from(s: Scheme) -> AnyScheme {
        AnyScheme::Adaptive(s)
    }
}

impl From<StaticScheme> for AnyScheme {
    fn from(s: StaticScheme) -> AnyScheme {
        AnyScheme::Static(s)
    }
}

/// The `C` sequence of the optimality conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateGeneratorSequence {
    ops: Vec<Pauli>,
}

impl CandidateGeneratorSequence {
    /// Checks that `ops` is an independent generating set of the code's stabilizer.
    pub fn new(code: &StabilizerCode, ops: Vec<Pauli>) -> Result<CandidateGeneratorSequence> {
        let seq = CandidateGeneratorSequence { ops };
        if let Some(v) = seq.violation(code) {
            return Err(Error::InvalidScheme(v));
        }
        Ok(seq)
    }

    pub(crate) fn unchecked(ops: Vec<Pauli>) -> CandidateGeneratorSequence {
        CandidateGeneratorSequence { ops }
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn violation(&self, code: &StabilizerCode) -> Option<String> {
        let n = code.n();
        if self.ops.len() + 1 != n {
            return Some(format!("{} candidates for a code on {n} qubits", self.ops.len()));
        }
        if self.ops.iter().any(|c| c.n() != n) {
            return Some("candidate on the wrong number of qubits".into());
        }
        let b = match SymplecticBasis::from_ops(n, &self.ops) {
            Ok(b) => b,
            Err(e) => return Some(e.to_string()),
        };
        if b.rank() != self.ops.len() {
            return Some("candidates are not independent".into());
        }
        let g = code.stabilizer_basis();
        if let Some(c) = self.ops.iter().find(|c| !g.contains(c)) {
            return Some(format!("{c} is not a stabilizer"));
        }
        None
    }
}

/// Two-code form: every operator acts on `n + n` qubits.
#[derive(Clone, Debug)]
pub struct DoubledScheme {
    pub id: String,
    pub pre_steps: Vec<Pauli>,
    pub order: Vec<usize>,
    pub bases: Vec<Pauli>,
    pub logicals: Vec<(Pauli, Pauli)>,
}

fn doubled(p: &Pauli) -> Pauli {
    p.tensor(p)
}

fn undouble(p: &Pauli) -> Result<Pauli> {
    let n = p.n() / 2;
    if p.n() % 2 != 0 {
        return Err(Error::InvalidScheme(format!("{p} has odd length")));
    }
    let (a, b) = (p.block(0, n), p.block(n, n));
    if a.stripped() != b.stripped() {
        return Err(Error::InvalidScheme(format!("{} is not transversal", p.display_split(n))));
    }
    Ok(a.with_sign(1))
}

fn single_site(p: &Pauli) -> Result<(usize, Letter)> {
    match p.support().as_slice() {
        [s] => Ok((*s, p.letter(*s))),
        _ => Err(Error::InvalidScheme(format!("{p} is not a single-qubit basis"))),
    }
}

/// Two-code form of `s`: bases `b ⊗ b`, logical pairs `X̄ ⊗ X̄`, `Z̄ ⊗ Z̄`.
pub fn lift_to_two_code(s: &Scheme) -> DoubledScheme {
    let parent_n = s.target.parent.n();
    DoubledScheme {
        id: s.id.clone(),
        pre_steps: s.target.pre_steps.iter().map(|p| doubled(&Pauli::single(parent_n, p.site, p.letter))).collect(),
        order: s.order.clone(),
        bases: (0..s.n()).map(|j| doubled(&s.basis_op(j))).collect(),
        logicals: s.logicals.iter().map(|(x, z)| (doubled(x), doubled(z))).collect(),
    }
}

/// Inverse of [`lift_to_two_code`]; `parent` is the code each block carries.
pub fn reduce_to_single_code(d: &DoubledScheme, parent: &StabilizerCode) -> Result<Scheme> {
    let mut pre = Vec::with_capacity(d.pre_steps.len());
    for p in &d.pre_steps {
        let (site, letter) = single_site(&undouble(p)?)?;
        pre.push(PreStep { site, letter });
    }
    let target = Target::new(parent.clone(), pre)?;
    let mut bases = Vec::with_capacity(d.bases.len());
    for (j, b) in d.bases.iter().enumerate() {
        let (site, letter) = single_site(&undouble(b)?)?;
        if d.order.get(j) != Some(&site) {
            return Err(Error::InvalidScheme(format!("basis {j} acts on site {site}, not on the scheduled site")));
        }
        bases.push(letter);
    }
    let mut logicals = Vec::with_capacity(d.logicals.len());
    for (x, z) in &d.logicals {
        logicals.push((undouble(x)?, undouble(z)?));
    }
    Scheme::new(d.id.clone(), target, d.order.clone(), bases, logicals)
}

fn letters_string(ls: &[Letter]) -> String {
    ls.iter().map(|l| l.as_char()).collect()
}

fn parse_letters(s: &str) -> Result<Vec<Letter>> {
    s.chars().map(|c| Letter::from_char(c).ok_or_else(|| Error::Format(format!("bad basis letter {c:?}")))).collect()
}

fn parse_usize(s: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::Format(format!("expected an index, got {s:?}")))
}

impl AnyScheme {
    /// Plain-text form. Adaptive: `scheme`, `pre`, `order`, `bases`, one `L`
    /// line per position; static: `static`, `pre`, `bases`. Optional `C` lines
    /// carry a candidate sequence.
    pub fn to_text(&self, candidates: Option<&CandidateGeneratorSequence>) -> String {
        let mut s = String::new();
        let t = self.target();
        match self {
            AnyScheme::Adaptive(a) => {
                let _ = writeln!(s, "scheme {}", a.id);
                for p in t.pre_steps() {
                    let _ = writeln!(s, "pre {} {}", p.letter, p.site);
                }
                let order: Vec<String> = a.order.iter().map(|o| o.to_string()).collect();
                let _ = writeln!(s, "order {}", order.join(" "));
                let _ = writeln!(s, "bases {}", letters_string(&a.bases));
                for (x, z) in &a.logicals {
                    let _ = writeln!(s, "L {x} {z}");
                }
            }
            AnyScheme::Static(st) => {
                let _ = writeln!(s, "static {}", st.id);
                for p in t.pre_steps() {
                    let _ = writeln!(s, "pre {} {}", p.letter, p.site);
                }
                let _ = writeln!(s, "bases {}", letters_string(&st.bases));
            }
        }
        if let Some(c) = candidates {
            for op in c.ops() {
                let _ = writeln!(s, "C {op}");
            }
        }
        s
    }

    /// Parses [`AnyScheme::to_text`] output against the code it was written for.
    pub fn from_text(text: &str, parent: &StabilizerCode) -> Result<(AnyScheme, Option<CandidateGeneratorSequence>)> {
        let mut kind: Option<(bool, String)> = None;
        let mut pre = Vec::new();
        let mut order = None;
        let mut bases = None;
        let mut logicals = Vec::new();
        let mut cands = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            let bad = |m: &str| Error::Format(format!("line {}: {m}", lineno + 1));
            match key {
                "scheme" => kind = Some((true, rest.to_string())),
                "static" => kind = Some((false, rest.to_string())),
                "pre" => {
                    let mut it = rest.split_whitespace();
                    let letter = it.next().and_then(|l| l.chars().next()).and_then(Letter::from_char).ok_or_else(|| bad("pre needs a letter"))?;
                    let site = parse_usize(it.next().ok_or_else(|| bad("pre needs a site"))?)?;
                    pre.push(PreStep { site, letter });
                }
                "order" => order = Some(rest.split_whitespace().map(parse_usize).collect::<Result<Vec<_>>>()?),
                "bases" => bases = Some(parse_letters(&rest.replace(char::is_whitespace, ""))?),
                "L" => {
                    let parts: Vec<&str> = rest.split_whitespace().collect();
                    if parts.len() != 2 {
                        return Err(bad("L needs two operator literals"));
                    }
                    logicals.push((parts[0].parse::<Pauli>()?, parts[1].parse::<Pauli>()?));
                }
                "C" => cands.push(rest.parse::<Pauli>()?),
                other => return Err(bad(&format!("unknown key {other:?}"))),
            }
        }
        let (adaptive, id) = kind.ok_or_else(|| Error::Format("missing `scheme` or `static` header".into()))?;
        let target = Target::new(parent.clone(), pre)?;
        let bases = bases.ok_or_else(|| Error::Format("missing `bases`".into()))?;
        let scheme: AnyScheme = if adaptive {
            let order = order.ok_or_else(|| Error::Format("missing `order`".into()))?;
            Scheme::new(id, target, order, bases, logicals)?.into()
        } else {
            StaticScheme::new(id, target, bases)?.into()
        };
        let cands = if cands.is_empty() { None } else { Some(CandidateGeneratorSequence::unchecked(cands)) };
        Ok((scheme, cands))
    }
}

//! Stabilizer states of two encoded qubits under destructive Pauli measurements.
//!
//! Generators carry an origin tag so that the evolution can be read in the
//! three-part form: evolved code stabilizers, recorded observables and the
//! two generators holding the logical Bell variables. A destabilizer for each
//! generator is kept alongside; it makes the decomposition of a commuting
//! observable a linear-time lookup instead of an elimination.

use std::fmt::Write as _;

use rand::Rng;
use serde::Serialize;

use crate::codes::StabilizerCode;
use crate::error::{Error, Result};
use crate::gf2::SymplecticBasis;
use crate::pauli::Pauli;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Origin {
    CodeStabilizer,
    Measured,
    LogicalX,
    LogicalZ,
    LogicalY,
}

impl Origin {
    pub fn is_logical(self) -> bool {
        matches!(self, Origin::LogicalX | Origin::LogicalZ | Origin::LogicalY)
    }

    fn logical_bits(self) -> (bool, bool) {
        match self {
            Origin::LogicalX => (true, false),
            Origin::LogicalZ => (false, true),
            Origin::LogicalY => (true, true),
            _ => (false, false),
        }
    }

    fn from_logical_bits(x: bool, z: bool) -> Option<Origin> {
        match (x, z) {
            (true, false) => Some(Origin::LogicalX),
            (false, true) => Some(Origin::LogicalZ),
            (true, true) => Some(Origin::LogicalY),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LogicalClass {
    X,
    Y,
    Z,
}

/// Factor split of a determined observable: code stabilizers, records, logicals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Determination {
    pub sign: i8,
    pub factors: Vec<usize>,
    pub gamma: Vec<usize>,
    pub mu: Vec<usize>,
    pub nu: Vec<usize>,
    pub reveals: Option<LogicalClass>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Anticommuting { witness: usize },
    Determined(Determination),
    Forbidden { logical: Vec<usize> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RecordKind {
    SingleQubit,
    TransversalProduct,
    BellSuccess,
}

#[derive(Clone, Debug)]
pub struct RecordEntry {
    pub observable: Pauli,
    pub outcome: i8,
    pub kind: RecordKind,
}

/// Ordered, pairwise-commuting measurement record.
#[derive(Clone, Debug, Default)]
pub struct MeasurementRecord {
    entries: Vec<RecordEntry>,
}

impl MeasurementRecord {
    pub fn new() -> MeasurementRecord {
        MeasurementRecord::default()
    }

    pub fn push(&mut self, observable: Pauli, outcome: i8, kind: RecordKind) -> Result<()> {
        if let Some(bad) = self.entries.iter().find(|e| !e.observable.commutes_unchecked(&observable)) {
            return Err(Error::InvalidScheme(format!(
                "recorded observable {} does not commute with earlier {}",
                observable, bad.observable
            )));
        }
        self.entries.push(RecordEntry { observable, outcome, kind });
        Ok(())
    }

    /// Appends without the commutation check; for callers that guarantee it.
    pub(crate) fn push_unchecked(&mut self, observable: Pauli, outcome: i8, kind: RecordKind) {
        self.entries.push(RecordEntry { observable, outcome, kind });
    }

    pub fn entries(&self) -> &[RecordEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Whether measuring a forbidden observable is refused or carried out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ForbiddenPolicy {
    Refuse,
    Override,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureOutcome {
    pub outcome: i8,
    pub random: bool,
    pub reveals: Option<LogicalClass>,
    pub forbidden: bool,
}

#[derive(Clone, Debug)]
pub struct StabilizerState {
    n: usize,
    split: Option<usize>,
    stabs: Vec<Pauli>,
    destabs: Vec<Pauli>,
    tags: Vec<Origin>,
    assignment: Option<(i8, i8)>,
}

fn sign_between(prod: &Pauli, obs: &Pauli) -> i8 {
    if (prod.phase() + 4 - obs.phase()) % 4 == 0 {
        1
    } else {
        -1
    }
}

/// Destabilizers `d_i` with `{d_i, g_j} = 0` exactly when `i = j`.
fn destabilizers(stabs: &[Pauli], n: usize) -> Result<Vec<Pauli>> {
    let m = stabs.len();
    let w = n.div_ceil(64);
    // rows of the system: swapped symplectic vectors, so a dot product is the symplectic form
    let mut rows: Vec<Vec<u64>> = stabs
        .iter()
        .map(|s| {
            let mut v = s.z_words().to_vec();
            v.extend_from_slice(s.x_words());
            v
        })
        .collect();
    let tw = m.div_ceil(64).max(1);
    let mut t: Vec<Vec<u64>> = (0..m)
        .map(|i| {
            let mut v = vec![0u64; tw];
            v[i / 64] |= 1 << (i % 64);
            v
        })
        .collect();
    let mut pivots = Vec::with_capacity(m);
    let mut r = 0;
    for c in 0..2 * n {
        if r == m {
            break;
        }
        let (cw, cb) = if c < n { (c / 64, c % 64) } else { (w + (c - n) / 64, (c - n) % 64) };
        let Some(p) = (r..m).find(|&i| (rows[i][cw] >> cb) & 1 == 1) else { continue };
        rows.swap(r, p);
        t.swap(r, p);
        for i in 0..m {
            if i != r && (rows[i][cw] >> cb) & 1 == 1 {
                let (src, tsrc) = (rows[r].clone(), t[r].clone());
                rows[i].iter_mut().zip(&src).for_each(|(a, b)| *a ^= b);
                t[i].iter_mut().zip(&tsrc).for_each(|(a, b)| *a ^= b);
            }
        }
        pivots.push(c);
        r += 1;
    }
    if r < m {
        return Err(Error::InvalidCode("generators are not independent".into()));
    }
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        // the solution vector lives in the unswapped (x | z) layout
        let mut x = vec![0u64; w];
        let mut z = vec![0u64; w];
        for (row, &c) in pivots.iter().enumerate() {
            if (t[row][i / 64] >> (i % 64)) & 1 == 1 {
                if c < n {
                    x[c / 64] |= 1 << (c % 64);
                } else {
                    let c = c - n;
                    z[c / 64] |= 1 << (c % 64);
                }
            }
        }
        out.push(Pauli::from_words(n, &x, &z, 0));
    }
    Ok(out)
}

impl StabilizerState {
    /// State from a full set of commuting, independent generators.
    pub fn from_generators(gens: Vec<(Pauli, Origin)>) -> Result<StabilizerState> {
        let n = gens.first().map(|g| g.0.n()).ok_or_else(|| Error::InvalidCode("no generators".into()))?;
        if gens.len() != n {
            return Err(Error::InvalidCode(format!("{} generators for {} qubits", gens.len(), n)));
        }
        for (g, _) in &gens {
            if g.n() != n {
                return Err(Error::Dimension(g.n(), n));
            }
            if !g.is_hermitian() {
                return Err(Error::NonHermitian(g.to_string()));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if !gens[i].0.commutes_unchecked(&gens[j].0) {
                    return Err(Error::InvalidCode(format!("{} and {} anticommute", gens[i].0, gens[j].0)));
                }
            }
        }
        let (stabs, tags): (Vec<Pauli>, Vec<Origin>) = gens.into_iter().unzip();
        let destabs = destabilizers(&stabs, n)?;
        Ok(StabilizerState { n, split: None, stabs, destabs, tags, assignment: None })
    }

    /// Uniform mixture picture of two encoded qubits in a Bell state with
    /// logical variables `(l_x, l_z)`.
    pub fn init_encoded_bell(c1: &StabilizerCode, c2: &StabilizerCode, l_x: i8, l_z: i8) -> Result<StabilizerState> {
        c1.validate()?;
        c2.validate()?;
        let (n1, n2) = (c1.n(), c2.n());
        let mut gens = Vec::with_capacity(n1 + n2);
        for g in c1.generators() {
            gens.push((g.tensor(&Pauli::identity(n2)), Origin::CodeStabilizer));
        }
        for g in c2.generators() {
            gens.push((Pauli::identity(n1).tensor(g), Origin::CodeStabilizer));
        }
        gens.push((c1.logical_x().tensor(c2.logical_x()).with_sign(l_x), Origin::LogicalX));
        gens.push((c1.logical_z().tensor(c2.logical_z()).with_sign(l_z), Origin::LogicalZ));
        let mut s = StabilizerState::from_generators(gens)?;
        s.split = Some(n1);
        s.assignment = Some((l_x, l_z));
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn split(&self) -> Option<usize> {
        self.split
    }

    pub fn generators(&self) -> impl Iterator<Item = (&Pauli, Origin)> {
        self.stabs.iter().zip(self.tags.iter().copied())
    }

    /// Stabilizers, destabilizers and origin tags.
    pub(crate) fn tableau(&self) -> (&[Pauli], &[Pauli], &[Origin]) {
        (&self.stabs, &self.destabs, &self.tags)
    }

    pub fn generator(&self, i: usize) -> (&Pauli, Origin) {
        (&self.stabs[i], self.tags[i])
    }

    pub fn logical_assignment(&self) -> Option<(i8, i8)> {
        self.assignment
    }

    /// Re-signs the logical generators for a new `(l_x, l_z)`; only valid on a
    /// state fresh from [`StabilizerState::init_encoded_bell`].
    pub fn reset_logicals(&mut self, l_x: i8, l_z: i8) {
        for (g, t) in self.stabs.iter_mut().zip(&self.tags) {
            match t {
                Origin::LogicalX => *g = g.clone().with_sign(l_x),
                Origin::LogicalZ => *g = g.clone().with_sign(l_z),
                _ => {}
            }
        }
        self.assignment = Some((l_x, l_z));
    }

    pub fn classify(&self, obs: &Pauli) -> Result<Classification> {
        if obs.n() != self.n {
            return Err(Error::Dimension(obs.n(), self.n));
        }
        if !obs.is_hermitian() {
            return Err(Error::NonHermitian(obs.to_string()));
        }
        Ok(self.classify_unchecked(obs))
    }

    fn classify_unchecked(&self, obs: &Pauli) -> Classification {
        let mut logical = Vec::new();
        for (i, g) in self.stabs.iter().enumerate() {
            if !g.commutes_unchecked(obs) {
                if self.tags[i].is_logical() {
                    logical.push(i);
                } else {
                    return Classification::Anticommuting { witness: i };
                }
            }
        }
        if !logical.is_empty() {
            return Classification::Forbidden { logical };
        }
        Classification::Determined(self.determine(obs))
    }

    fn determine(&self, obs: &Pauli) -> Determination {
        let factors: Vec<usize> = (0..self.n).filter(|&i| !self.destabs[i].commutes_unchecked(obs)).collect();
        let mut prod = Pauli::identity(self.n);
        let (mut gamma, mut mu, mut nu) = (Vec::new(), Vec::new(), Vec::new());
        let (mut lx, mut lz) = (false, false);
        for &i in &factors {
            prod.mul_assign_unchecked(&self.stabs[i]);
            match self.tags[i] {
                Origin::CodeStabilizer => gamma.push(i),
                Origin::Measured => mu.push(i),
                t => {
                    let (a, b) = t.logical_bits();
                    lx ^= a;
                    lz ^= b;
                    nu.push(i);
                }
            }
        }
        debug_assert_eq!(prod.stripped(), obs.stripped());
        let reveals = match Origin::from_logical_bits(lx, lz) {
            Some(Origin::LogicalX) => Some(LogicalClass::X),
            Some(Origin::LogicalZ) => Some(LogicalClass::Z),
            Some(_) => Some(LogicalClass::Y),
            None => None,
        };
        Determination { sign: sign_between(&prod, obs), factors, gamma, mu, nu, reveals }
    }

    /// Measures `obs` in place. Random outcomes come from `forced` when given,
    /// otherwise from `rng`.
    pub fn measure<R: Rng + ?Sized>(
        &mut self,
        obs: &Pauli,
        forced: Option<i8>,
        rng: &mut R,
        policy: ForbiddenPolicy,
    ) -> Result<MeasureOutcome> {
        match self.classify(obs)? {
            Classification::Determined(d) => {
                if let Some(f) = forced {
                    if f != d.sign {
                        return Err(Error::InconsistentOutcome {
                            obs: obs.to_string(),
                            forced: f,
                            determined: d.sign,
                        });
                    }
                }
                Ok(MeasureOutcome { outcome: d.sign, random: false, reveals: d.reveals, forbidden: false })
            }
            Classification::Anticommuting { witness } => {
                let outcome = forced.unwrap_or_else(|| if rng.gen::<bool>() { 1 } else { -1 });
                self.replace(witness, obs, outcome, None);
                Ok(MeasureOutcome { outcome, random: true, reveals: None, forbidden: false })
            }
            Classification::Forbidden { logical } => {
                if policy == ForbiddenPolicy::Refuse {
                    return Err(Error::Forbidden(obs.to_string()));
                }
                let outcome = forced.unwrap_or_else(|| if rng.gen::<bool>() { 1 } else { -1 });
                self.replace(logical[0], obs, outcome, Some(&logical));
                Ok(MeasureOutcome { outcome, random: true, reveals: None, forbidden: true })
            }
        }
    }

    /// Functional form of [`StabilizerState::measure`].
    pub fn measured<R: Rng + ?Sized>(
        &self,
        obs: &Pauli,
        forced: Option<i8>,
        rng: &mut R,
        policy: ForbiddenPolicy,
    ) -> Result<(i8, StabilizerState)> {
        let mut s = self.clone();
        let o = s.measure(obs, forced, rng, policy)?;
        Ok((o.outcome, s))
    }

    fn replace(&mut self, p: usize, obs: &Pauli, outcome: i8, logical: Option<&[usize]>) {
        let survivor = self.stabs[p].clone();
        let survivor_tag = self.tags[p];
        for i in 0..self.n {
            if i != p && !self.stabs[i].commutes_unchecked(obs) {
                self.stabs[i].mul_assign_unchecked(&survivor);
                if logical.is_some_and(|l| l.contains(&i)) {
                    let (a, b) = self.tags[i].logical_bits();
                    let (c, d) = survivor_tag.logical_bits();
                    self.tags[i] = Origin::from_logical_bits(a ^ c, b ^ d).unwrap_or(Origin::Measured);
                }
            }
            if i != p && !self.destabs[i].commutes_unchecked(obs) {
                self.destabs[i].mul_assign_unchecked(&survivor);
            }
        }
        self.destabs[p] = survivor;
        self.stabs[p] = obs.clone().with_sign(outcome);
        self.tags[p] = Origin::Measured;
    }

    /// One generator per line as a signed literal followed by its origin tag.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (g, t) in self.generators() {
            let lit = match self.split {
                Some(k) => g.display_split(k),
                None => g.to_string(),
            };
            let _ = writeln!(s, "{lit} {t:?}");
        }
        s
    }

    pub fn logical_generator_count(&self) -> usize {
        self.tags.iter().filter(|t| t.is_logical()).count()
    }
}

/// What the record alone reveals about the logical Bell variables.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LogicalKnowledge {
    pub x: Option<i8>,
    pub y: Option<i8>,
    pub z: Option<i8>,
}

impl LogicalKnowledge {
    pub fn known_count(&self) -> usize {
        [self.x, self.y, self.z].iter().filter(|v| v.is_some()).count()
    }

    /// `(l_x, l_z)` once two classes are known.
    pub fn claim(&self) -> Option<(i8, i8)> {
        match (self.x, self.y, self.z) {
            (Some(x), _, Some(z)) => Some((x, z)),
            (Some(x), Some(y), None) => Some((x, -y * x)),
            (None, Some(y), Some(z)) => Some((-y * z, z)),
            _ => None,
        }
    }
}

/// Precomputed span of both codes' stabilizers for repeated inference.
#[derive(Clone, Debug)]
pub struct LogicalInference {
    base: SymplecticBasis,
    reps: [(LogicalClass, Pauli); 3],
}

impl LogicalInference {
    pub fn new(c1: &StabilizerCode, c2: &StabilizerCode) -> Result<LogicalInference> {
        let (n1, n2) = (c1.n(), c2.n());
        let mut base = SymplecticBasis::new(n1 + n2);
        for g in c1.generators() {
            base.extend(&g.tensor(&Pauli::identity(n2)))?;
        }
        for g in c2.generators() {
            base.extend(&Pauli::identity(n1).tensor(g))?;
        }
        let xx = c1.logical_x().tensor(c2.logical_x());
        let zz = c1.logical_z().tensor(c2.logical_z());
        let yy = xx.multiply(&zz)?.negated();
        if !yy.is_hermitian() {
            return Err(Error::InvalidCode("logical representatives do not anticommute".into()));
        }
        Ok(LogicalInference { base, reps: [(LogicalClass::X, xx), (LogicalClass::Y, yy), (LogicalClass::Z, zz)] })
    }

    pub fn infer(&self, record: &MeasurementRecord) -> LogicalKnowledge {
        let mut b = self.base.clone();
        for e in record.entries() {
            let _ = b.extend(&e.observable.clone().with_sign(e.outcome));
        }
        let mut k = LogicalKnowledge::default();
        for (class, rep) in &self.reps {
            if let Ok(Some(coeffs)) = b.in_span(rep) {
                let prod = b.signed_product(&coeffs);
                let v = Some(sign_between(&prod, rep));
                match class {
                    LogicalClass::X => k.x = v,
                    LogicalClass::Y => k.y = v,
                    LogicalClass::Z => k.z = v,
                }
            }
        }
        k
    }
}

/// Information view: which logical classes the record determines, and their signs.
pub fn infer_logicals(record: &MeasurementRecord, c1: &StabilizerCode, c2: &StabilizerCode) -> Result<LogicalKnowledge> {
    Ok(LogicalInference::new(c1, c2)?.infer(record))
}

//! Dual-rail linear-optics Bell analyzer on the two-photon Fock sector.
//!
//! Qubit 1 lives in modes (0, 1), qubit 2 in modes (2, 3); `|0⟩` is a photon
//! in the first mode of a pair. The analyzer mixes modes (0, 2) and (1, 3) on
//! symmetric beam splitters and counts photons. Amplitudes are exact: Gaussian
//! rationals plus Gaussian rationals times √2.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub const MODES: usize = 4;
pub type Pattern = [u8; MODES];

type Gauss = Complex<Rational64>;

fn gauss(re: i64, im: i64) -> Gauss {
    Complex::new(Rational64::from_integer(re), Rational64::from_integer(im))
}

/// `a + b·√2` with Gaussian-rational `a`, `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Amp {
    a: Gauss,
    b: Gauss,
}

impl Amp {
    pub fn zero() -> Amp {
        Amp { a: Gauss::zero(), b: Gauss::zero() }
    }

    pub fn one() -> Amp {
        Amp::gaussian(1, 0)
    }

    pub fn i() -> Amp {
        Amp::gaussian(0, 1)
    }

    pub fn gaussian(re: i64, im: i64) -> Amp {
        Amp { a: gauss(re, im), b: Gauss::zero() }
    }

    pub fn sqrt2() -> Amp {
        Amp { a: Gauss::zero(), b: Gauss::one() }
    }

    pub fn inv_sqrt2() -> Amp {
        Amp { a: Gauss::zero(), b: Gauss::new(Rational64::new(1, 2), Rational64::zero()) }
    }

    pub fn scale(self, r: Rational64) -> Amp {
        Amp { a: self.a * r, b: self.b * r }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conj(self) -> Amp {
        Amp { a: self.a.conj(), b: self.b.conj() }
    }

    /// `|amp|²` when it is rational.
    pub fn norm_sqr(self) -> Result<Rational64> {
        let p = self * self.conj();
        if !p.b.is_zero() || !p.a.im.is_zero() {
            return Err(Error::Physical(format!("|{self}|² is not rational")));
        }
        Ok(p.a.re)
    }

    /// `self = λ·other` for some `λ`, returned when `other` is non-zero.
    fn ratio_to(self, other: Amp) -> Option<Amp> {
        // 1 / (c + d√2) = (c − d√2) / (c² − 2d²)
        let den = other.a * other.a - other.b * other.b * Rational64::from_integer(2);
        if den.is_zero() {
            return None;
        }
        let inv = Amp { a: other.a / den, b: -other.b / den };
        Some(self * inv)
    }
}

impl Add for Amp {
    type Output = Amp;
    fn add(self, o: Amp) -> Amp {
        Amp { a: self.a + o.a, b: self.b + o.b }
    }
}

impl Sub for Amp {
    type Output = Amp;
    fn sub(self, o: Amp) -> Amp {
        Amp { a: self.a - o.a, b: self.b - o.b }
    }
}

impl Neg for Amp {
    type Output = Amp;
    fn neg(self) -> Amp {
        Amp { a: -self.a, b: -self.b }
    }
}

impl Mul for Amp {
    type Output = Amp;
    fn mul(self, o: Amp) -> Amp {
        let two = Rational64::from_integer(2);
        Amp { a: self.a * o.a + self.b * o.b * two, b: self.a * o.b + self.b * o.a }
    }
}

fn pow2_exponent(d: i64) -> Option<u32> {
    (d > 0 && d & (d - 1) == 0).then(|| d.trailing_zeros())
}

/// `(p+qi)/2^(k/2)` form of a Gaussian rational with a power-of-two denominator.
fn half_power_form(g: Gauss, extra_sqrt2: bool) -> Option<String> {
    let j = pow2_exponent(*g.re.denom())?.max(pow2_exponent(*g.im.denom())?);
    let den = 1i64 << j;
    let (p, q) = (g.re.numer() * (den / g.re.denom()), g.im.numer() * (den / g.im.denom()));
    let k = 2 * j as i64 - extra_sqrt2 as i64;
    let (p, q, k) = if k < 0 { (2 * p, 2 * q, k + 2) } else { (p, q, k) };
    let sign = if q < 0 { '-' } else { '+' };
    Some(format!("({p}{sign}{}i)/2^({k}/2)", q.abs()))
}

impl fmt::Display for Amp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let form = if self.b.is_zero() {
            half_power_form(self.a, false)
        } else if self.a.is_zero() {
            half_power_form(self.b, true)
        } else {
            None
        };
        match form {
            Some(s) => f.write_str(&s),
            None => write!(f, "({}) + ({})·√2", self.a, self.b),
        }
    }
}

/// Polynomial in creation operators acting on the vacuum.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Creation(BTreeMap<Pattern, Amp>);

impl Creation {
    pub fn vacuum() -> Creation {
        Creation::monomial([0; MODES], Amp::one())
    }

    pub fn monomial(powers: Pattern, c: Amp) -> Creation {
        let mut m = BTreeMap::new();
        m.insert(powers, c);
        Creation(m)
    }

    /// `c · a†_i a†_j`.
    pub fn pair(i: usize, j: usize, c: Amp) -> Creation {
        let mut p = [0; MODES];
        p[i] += 1;
        p[j] += 1;
        Creation::monomial(p, c)
    }

    fn add_term(&mut self, powers: Pattern, c: Amp) {
        let e = self.0.entry(powers).or_insert_with(Amp::zero);
        *e = *e + c;
        if e.is_zero() {
            self.0.remove(&powers);
        }
    }

    pub fn plus(mut self, o: &Creation) -> Creation {
        for (&p, &c) in &o.0 {
            self.add_term(p, c);
        }
        self
    }

    fn times(&self, o: &Creation) -> Creation {
        let mut out = Creation::default();
        for (p, &c) in &self.0 {
            for (q, &d) in &o.0 {
                let mut r = *p;
                for k in 0..MODES {
                    r[k] += q[k];
                }
                out.add_term(r, c * d);
            }
        }
        out
    }

    /// Substitutes `a†_j → Σ_k m[k][j] a†_k`.
    pub fn transform(&self, m: &[[Amp; MODES]; MODES]) -> Creation {
        let images: Vec<Creation> = (0..MODES)
            .map(|j| {
                let mut c = Creation::default();
                for (k, row) in m.iter().enumerate() {
                    let mut p = [0; MODES];
                    p[k] = 1;
                    c.add_term(p, row[j]);
                }
                c
            })
            .collect();
        let mut out = Creation::default();
        for (p, &c) in &self.0 {
            let mut term = Creation::monomial([0; MODES], c);
            for (j, &e) in p.iter().enumerate() {
                for _ in 0..e {
                    term = term.times(&images[j]);
                }
            }
            out = out.plus(&term);
        }
        out
    }

    /// Fock amplitudes: `a†^n / √(n!)` per mode, so a monomial picks up `√(Π n!)`.
    pub fn to_fock(&self) -> Result<FockVector> {
        let mut out = BTreeMap::new();
        for (p, &c) in &self.0 {
            let mut amp = c;
            for &n in p {
                match n {
                    0 | 1 => {}
                    2 => amp = amp * Amp::sqrt2(),
                    _ => return Err(Error::Physical(format!("occupation {n} is outside the two-photon model"))),
                }
            }
            out.insert(*p, amp);
        }
        Ok(FockVector(out))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FockVector(BTreeMap<Pattern, Amp>);

impl FockVector {
    /// Fock amplitudes as given; zero amplitudes are dropped.
    pub fn from_terms(terms: impl IntoIterator<Item = (Pattern, Amp)>) -> FockVector {
        let mut c = Creation::default();
        for (p, a) in terms {
            c.add_term(p, a);
        }
        FockVector(c.0)
    }

    pub fn amplitude(&self, p: &Pattern) -> Amp {
        self.0.get(p).copied().unwrap_or_else(Amp::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Pattern, &Amp)> {
        self.0.iter()
    }

    pub fn norm_sqr(&self) -> Result<Rational64> {
        self.0.values().try_fold(Rational64::zero(), |acc, a| Ok(acc + a.norm_sqr()?))
    }

    /// `Some(λ)` with `self = λ·other`.
    pub fn proportional_to(&self, other: &FockVector) -> Option<Amp> {
        if self.0.keys().ne(other.0.keys()) {
            return None;
        }
        let (p, &a) = other.0.iter().next()?;
        let lambda = self.0[p].ratio_to(a)?;
        other.0.iter().all(|(q, &b)| self.0[q] == lambda * b).then_some(lambda)
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.0.iter().map(|(p, a)| format!("{a}|{}⟩", p.iter().map(|n| n.to_string()).collect::<String>())).collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Symmetric beam splitter: `a† → (a† + i b†)/√2`, `b† → (i a† + b†)/√2`.
pub fn beam_splitter_matrix(a: usize, b: usize) -> Result<[[Amp; MODES]; MODES]> {
    if a == b || a >= MODES || b >= MODES {
        return Err(Error::Physical(format!("invalid mode pair ({a}, {b})")));
    }
    let mut m = [[Amp::zero(); MODES]; MODES];
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = Amp::one();
    }
    let s = Amp::inv_sqrt2();
    m[a][a] = s;
    m[b][a] = Amp::i() * s;
    m[a][b] = Amp::i() * s;
    m[b][b] = s;
    Ok(m)
}

pub fn beam_splitter_pair(state: &Creation, modes: (usize, usize)) -> Result<Creation> {
    Ok(state.transform(&beam_splitter_matrix(modes.0, modes.1)?))
}

/// Both beam splitters of the analyzer.
pub fn analyzer(state: &Creation) -> Result<FockVector> {
    beam_splitter_pair(&beam_splitter_pair(state, (0, 2))?, (1, 3))?.to_fock()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Bell {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl Bell {
    pub const ALL: [Bell; 4] = [Bell::PhiPlus, Bell::PhiMinus, Bell::PsiPlus, Bell::PsiMinus];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Bell::PhiPlus => "Φ+",
            Bell::PhiMinus => "Φ-",
            Bell::PsiPlus => "Ψ+",
            Bell::PsiMinus => "Ψ-",
        }
    }

    /// Two-qubit amplitudes over `|00⟩, |01⟩, |10⟩, |11⟩`.
    pub fn qubit_vector(self) -> [Amp; 4] {
        let s = Amp::inv_sqrt2();
        let z = Amp::zero();
        match self {
            Bell::PhiPlus => [s, z, z, s],
            Bell::PhiMinus => [s, z, z, -s],
            Bell::PsiPlus => [z, s, s, z],
            Bell::PsiMinus => [z, s, -s, z],
        }
    }

    pub fn dual_rail(self) -> Creation {
        dual_rail(&self.qubit_vector())
    }
}

/// Two-qubit state over `|00⟩ … |11⟩` as photons in modes (0|1, 2|3).
pub fn dual_rail(v: &[Amp; 4]) -> Creation {
    let mut c = Creation::default();
    for (k, &a) in v.iter().enumerate() {
        if !a.is_zero() {
            c = c.plus(&Creation::pair(k >> 1, 2 + (k & 1), a));
        }
    }
    c
}

/// All ten two-photon patterns on four modes.
pub fn two_photon_patterns() -> Vec<Pattern> {
    let mut out = Vec::new();
    for i in 0..MODES {
        for j in i..MODES {
            let mut p = [0; MODES];
            p[i] += 1;
            p[j] += 1;
            out.push(p);
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OutcomeClass {
    Unambiguous(Bell),
    /// `Z⊗Z`, `Z⊗I`, `I⊗Z` eigenvalues left by a non-identifying pattern.
    Partial { zz: i8, z1: i8, z2: i8 },
    /// No Bell input reaches this pattern.
    Impossible,
}

fn check_pattern(p: &Pattern) -> Result<()> {
    let total: u32 = p.iter().map(|&n| n as u32).sum();
    if total != 2 {
        return Err(Error::Physical(format!("pattern {p:?} has {total} photons, the analyzer sees two")));
    }
    Ok(())
}

pub fn classify_pattern(p: &Pattern) -> Result<OutcomeClass> {
    check_pattern(p)?;
    let mut from = Vec::new();
    for b in Bell::ALL {
        if !analyzer(&b.dual_rail())?.amplitude(p).is_zero() {
            from.push(b);
        }
    }
    match from.as_slice() {
        [] => return Ok(OutcomeClass::Impossible),
        [b] => return Ok(OutcomeClass::Unambiguous(*b)),
        _ => {}
    }
    // computational inputs that reach the pattern fix the Z values they agree on
    let mut zs = Vec::new();
    for k in 0..4 {
        let mut v = [Amp::zero(); 4];
        v[k] = Amp::one();
        if !analyzer(&dual_rail(&v))?.amplitude(p).is_zero() {
            zs.push((if k & 2 == 0 { 1 } else { -1 }, if k & 1 == 0 { 1 } else { -1 }));
        }
    }
    match zs.as_slice() {
        [(z1, z2)] => Ok(OutcomeClass::Partial { zz: z1 * z2, z1: *z1, z2: *z2 }),
        _ => Err(Error::Physical(format!("pattern {p:?} is neither identifying nor Z-resolving"))),
    }
}

/// Probability that the analyzer identifies the Bell state of a uniform Bell mixture.
pub fn success_probability() -> Result<Rational64> {
    let mut total = Rational64::zero();
    for b in Bell::ALL {
        let out = analyzer(&b.dual_rail())?;
        for p in two_photon_patterns() {
            if classify_pattern(&p)? == OutcomeClass::Unambiguous(b) {
                total += out.amplitude(&p).norm_sqr()? / 4;
            }
        }
    }
    Ok(total)
}

/// 2×2 matrix over the amplitude ring.
pub type Mat2 = [[Amp; 2]; 2];

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j]))
}

fn dagger(a: &Mat2) -> Mat2 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i].conj()))
}

fn hadamard() -> Mat2 {
    let s = Amp::inv_sqrt2();
    [[s, s], [s, -s]]
}

fn phase_gate() -> Mat2 {
    [[Amp::one(), Amp::zero()], [Amp::zero(), Amp::i()]]
}

fn pauli_mat(l: char) -> Mat2 {
    let (o, z) = (Amp::one(), Amp::zero());
    match l {
        'X' => [[z, o], [o, z]],
        'Y' => [[z, -Amp::i()], [Amp::i(), z]],
        'Z' => [[o, z], [z, -o]],
        _ => [[o, z], [z, o]],
    }
}

/// Global-phase-free key: divide by the first non-zero entry.
fn canonical(m: &Mat2) -> Mat2 {
    let pivot = m.iter().flatten().find(|a| !a.is_zero()).copied().expect("invertible");
    std::array::from_fn(|i| std::array::from_fn(|j| m[i][j].ratio_to(pivot).expect("non-zero pivot")))
}

/// The 24 single-qubit Cliffords modulo phase, generated by H and S.
pub fn clifford_group() -> Vec<Mat2> {
    let gens = [hadamard(), phase_gate()];
    let id = pauli_mat('I');
    let mut group = vec![id];
    let mut keys = vec![canonical(&id)];
    let mut frontier = vec![id];
    while let Some(g) = frontier.pop() {
        for h in &gens {
            let m = mat_mul(h, &g);
            let k = canonical(&m);
            if !keys.contains(&k) {
                keys.push(k);
                group.push(m);
                frontier.push(m);
            }
        }
    }
    group
}

fn apply_local(u1: &Mat2, u2: &Mat2, v: &[Amp; 4]) -> [Amp; 4] {
    std::array::from_fn(|out| {
        let (o1, o2) = (out >> 1, out & 1);
        (0..4).fold(Amp::zero(), |acc, k| acc + u1[o1][k >> 1] * u2[o2][k & 1] * v[k])
    })
}

fn proportional(a: &[Amp; 4], b: &[Amp; 4]) -> bool {
    let Some(k) = (0..4).find(|&k| !b[k].is_zero()) else { return false };
    let Some(l) = a[k].ratio_to(b[k]) else { return false };
    (0..4).all(|i| a[i] == l * b[i])
}

/// Bell permutation `σ` with `(U1⊗U2)|B⟩ ∝ |σ(B)⟩`, if the pair permutes the Bell basis.
pub fn bell_permutation(u1: &Mat2, u2: &Mat2) -> Option<[Bell; 4]> {
    let mut perm = [Bell::PhiPlus; 4];
    for b in Bell::ALL {
        let img = apply_local(u1, u2, &b.qubit_vector());
        perm[b.index()] = Bell::ALL.into_iter().find(|c| proportional(&img, &c.qubit_vector()))?;
    }
    Some(perm)
}

/// Analyzer preceded by local unitaries `U1 ⊗ U2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variant {
    pub u1: Mat2,
    pub u2: Mat2,
    pub permutation: [Bell; 4],
}

impl Variant {
    pub fn identity() -> Variant {
        Variant { u1: pauli_mat('I'), u2: pauli_mat('I'), permutation: Bell::ALL }
    }

    pub fn new(u1: Mat2, u2: Mat2) -> Result<Variant> {
        let permutation =
            bell_permutation(&u1, &u2).ok_or_else(|| Error::Physical("local unitaries do not permute the Bell basis".into()))?;
        Ok(Variant { u1, u2, permutation })
    }

    /// A variant realizing `perm` (`perm[b]` is where input `b` is sent).
    pub fn for_permutation(perm: [Bell; 4]) -> Result<Variant> {
        let mut seen = perm.map(|b| b.index());
        seen.sort_unstable();
        if seen != [0, 1, 2, 3] {
            return Err(Error::Physical(format!("{perm:?} is not a permutation")));
        }
        all_variants()?
            .into_iter()
            .find(|v| v.permutation == perm)
            .ok_or_else(|| Error::Physical(format!("{perm:?} is not realizable by local Cliffords")))
    }

    /// `(U1 U1', U2 U2')`: `other` first, then `self`.
    pub fn compose(&self, other: &Variant) -> Result<Variant> {
        Variant::new(mat_mul(&self.u1, &other.u1), mat_mul(&self.u2, &other.u2))
    }

    /// Guaranteed payload `(U1⊗U2)†(Z⊗Z)(U1⊗U2)` as `(sign, letter1, letter2)`.
    pub fn payload(&self) -> (i8, char, char) {
        let conj = |u: &Mat2| -> (i8, char) {
            let m = mat_mul(&dagger(u), &mat_mul(&pauli_mat('Z'), u));
            for l in ['X', 'Y', 'Z'] {
                let p = pauli_mat(l);
                if m == p {
                    return (1, l);
                }
                if m == p.map(|r| r.map(|a| -a)) {
                    return (-1, l);
                }
            }
            unreachable!("Cliffords map Z to a signed Pauli")
        };
        let (s1, l1) = conj(&self.u1);
        let (s2, l2) = conj(&self.u2);
        (s1 * s2, l1, l2)
    }

    /// Classification in the input frame: the analyzer sees `σ(B)`.
    pub fn classify(&self, p: &Pattern) -> Result<OutcomeClass> {
        Ok(match classify_pattern(p)? {
            OutcomeClass::Unambiguous(b) => {
                let input = Bell::ALL.into_iter().find(|&x| self.permutation[x.index()] == b).expect("bijection");
                OutcomeClass::Unambiguous(input)
            }
            other => other,
        })
    }
}

/// One variant per realizable Bell permutation.
pub fn all_variants() -> Result<Vec<Variant>> {
    let group = clifford_group();
    let mut out: Vec<Variant> = Vec::new();
    for u1 in &group {
        for u2 in &group {
            if let Some(perm) = bell_permutation(u1, u2) {
                if !out.iter().any(|v| v.permutation == perm) {
                    out.push(Variant { u1: *u1, u2: *u2, permutation: perm });
                }
            }
        }
    }
    Ok(out)
}

/// Hadamard on both qubits: the XX-type analyzer.
pub fn hadamard_variant() -> Result<Variant> {
    Variant::new(hadamard(), hadamard())
}

/// Output table for the four Bell inputs.
pub fn output_table() -> Result<Vec<(Bell, FockVector)>> {
    Bell::ALL.into_iter().map(|b| Ok((b, analyzer(&b.dual_rail())?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_is_fixed() {
        let v = beam_splitter_pair(&Creation::vacuum(), (0, 2)).unwrap();
        assert_eq!(v, Creation::vacuum());
        assert!(beam_splitter_pair(&Creation::vacuum(), (1, 1)).is_err());
    }

    #[test]
    fn rendering() {
        assert_eq!(Amp::inv_sqrt2().to_string(), "(1+0i)/2^(1/2)");
        assert_eq!((Amp::i() * Amp::gaussian(1, 0).scale(Rational64::new(1, 2))).to_string(), "(0+1i)/2^(2/2)");
        assert_eq!(Amp::sqrt2().to_string(), "(2+0i)/2^(1/2)");
    }

    #[test]
    fn clifford_group_has_24_elements_and_24_bell_permutations() {
        assert_eq!(clifford_group().len(), 24);
        assert_eq!(all_variants().unwrap().len(), 24);
    }

    #[test]
    fn photon_count_is_checked() {
        assert!(classify_pattern(&[1, 0, 0, 0]).is_err());
    }
}

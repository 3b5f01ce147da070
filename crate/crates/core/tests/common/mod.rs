//! Test oracles that share no code with the engine.
#![allow(dead_code)]

use logical_bm::scheme::AnyScheme;
use logical_bm::{Letter, Pauli, StabilizerCode};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

/// Symplectic vector of up to 128 qubits: X part in bits `0..n`, Z part in `n..2n`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Bits([u64; 4]);

impl Bits {
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn top(&self) -> Option<usize> {
        (0..4).rev().find(|&w| self.0[w] != 0).map(|w| 64 * w + 63 - self.0[w].leading_zeros() as usize)
    }

    pub fn xor(mut self, o: Bits) -> Bits {
        for w in 0..4 {
            self.0[w] ^= o.0[w];
        }
        self
    }
}

pub fn bits(p: &Pauli) -> Bits {
    let n = p.n();
    assert!(n <= 128);
    let mut v = Bits::default();
    for (j, l) in p.letters().into_iter().enumerate() {
        if matches!(l, Letter::X | Letter::Y) {
            v.set(j);
        }
        if matches!(l, Letter::Z | Letter::Y) {
            v.set(n + j);
        }
    }
    v
}

/// Row-echelon span over GF(2): rows kept in decreasing order of leading bit.
#[derive(Clone, Default)]
pub struct Span {
    rows: Vec<(usize, Bits)>,
}

impl Span {
    fn reduce(&self, mut v: Bits) -> Bits {
        for &(top, r) in &self.rows {
            if v.get(top) {
                v = v.xor(r);
            }
        }
        v
    }

    pub fn add(&mut self, v: Bits) {
        let v = self.reduce(v);
        if let Some(top) = v.top() {
            let at = self.rows.partition_point(|&(t, _)| t > top);
            self.rows.insert(at, (top, v));
        }
    }

    pub fn contains(&self, v: Bits) -> bool {
        self.reduce(v).top().is_none()
    }
}

fn letter_on(n: usize, site: usize, l: Letter) -> Bits {
    bits(&Pauli::single(n, site, l))
}

/// Logical classes (X, Y, Z) determined by the stabilizers plus `extra`.
pub fn determined(code: &StabilizerCode, extra: &[Bits]) -> (bool, bool, bool) {
    let mut s = Span::default();
    for g in code.generators() {
        s.add(bits(g));
    }
    for &e in extra {
        s.add(e);
    }
    let (lx, lz) = (bits(code.logical_x()), bits(code.logical_z()));
    (s.contains(lx), s.contains(lx.xor(lz)), s.contains(lz))
}

/// Exact success probability of a static scheme by flat enumeration of all
/// `2^n` outcome patterns.
pub fn flat_static_probability(scheme: &AnyScheme, p: &BigRational) -> BigRational {
    assert!(!scheme.is_adaptive());
    let code = scheme.code();
    let n = code.n();
    assert!(n <= 20, "flat oracle is for small codes");
    let order = scheme.order();
    let q = BigRational::one() - p;
    let mut total = BigRational::zero();
    for mask in 0u32..1 << n {
        let mut extra = Vec::new();
        for t in 0..n {
            let s = order[t];
            if mask >> t & 1 == 1 {
                extra.push(letter_on(n, s, Letter::X));
                extra.push(letter_on(n, s, Letter::Z));
            } else {
                extra.push(letter_on(n, s, scheme.basis_at(t)));
            }
        }
        let (x, _, z) = determined(code, &extra);
        if x && z {
            let k = mask.count_ones();
            total += Pow::pow(p, k) * Pow::pow(&q, n as u32 - k);
        }
    }
    total
}

pub fn r(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn one_minus_half_pow(k: u32) -> BigRational {
    BigRational::one() - BigRational::new(BigInt::one(), BigInt::one() << k)
}

//! GF(2) row spaces of symplectic vectors.
//!
//! [`SymplecticBasis`] keeps rows in echelon form together with the set of
//! inserted operators each row is built from, so span queries can return an
//! explicit decomposition. Signs are never tracked here: callers recover them
//! by multiplying the selected operators (see [`SymplecticBasis::signed_product`]).
//!
//! [`XorBasis128`] is the lean variant used by the exact enumerator: vectors on
//! at most 64 qubits packed into one `u128`, with an undo log for depth-first
//! search.

use crate::error::{Error, Result};
use crate::pauli::Pauli;

#[derive(Clone, Debug)]
struct Row {
    v: Vec<u64>,
    pivot: usize,
    coeffs: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct SymplecticBasis {
    n: usize,
    rows: Vec<Row>,
    inputs: Vec<Pauli>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extend {
    /// The operator was independent; it is now input number `index`.
    Added { index: usize },
    /// The operator was already in the span; it is still stored as input
    /// `index` and `coeffs` lists earlier inputs whose product equals it up to phase.
    Dependent { index: usize, coeffs: Vec<usize> },
}

fn vec_of(p: &Pauli) -> Vec<u64> {
    let mut v = p.x_words().to_vec();
    v.extend_from_slice(p.z_words());
    v
}

fn lowest_bit(v: &[u64]) -> Option<usize> {
    v.iter().enumerate().find(|(_, w)| **w != 0).map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
}

fn bit(v: &[u64], b: usize) -> bool {
    (v[b / 64] >> (b % 64)) & 1 == 1
}

fn xor_into(a: &mut [u64], b: &[u64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x ^= y;
    }
}

fn set_bit(v: &mut Vec<u64>, b: usize) {
    if v.len() <= b / 64 {
        v.resize(b / 64 + 1, 0);
    }
    v[b / 64] ^= 1 << (b % 64);
}

fn xor_grow(a: &mut Vec<u64>, b: &[u64]) {
    if a.len() < b.len() {
        a.resize(b.len(), 0);
    }
    xor_into(a, b);
}

fn bits_of(v: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (k, &w) in v.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            out.push(k * 64 + w.trailing_zeros() as usize);
            w &= w - 1;
        }
    }
    out
}

impl SymplecticBasis {
    pub fn new(n: usize) -> SymplecticBasis {
        SymplecticBasis { n, rows: Vec::new(), inputs: Vec::new() }
    }

    pub fn from_ops<'a>(n: usize, ops: impl IntoIterator<Item = &'a Pauli>) -> Result<SymplecticBasis> {
        let mut b = SymplecticBasis::new(n);
        for p in ops {
            b.extend(p)?;
        }
        Ok(b)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inputs(&self) -> &[Pauli] {
        &self.inputs
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.pivot).collect()
    }

    fn reduce(&self, v: &mut [u64]) -> Vec<u64> {
        let mut coeffs = Vec::new();
        for r in &self.rows {
            if bit(v, r.pivot) {
                xor_into(v, &r.v);
                xor_grow(&mut coeffs, &r.coeffs);
            }
        }
        coeffs
    }

    /// Inserts `op`; every call is numbered, dependent or not.
    pub fn extend(&mut self, op: &Pauli) -> Result<Extend> {
        if op.n() != self.n {
            return Err(Error::Dimension(op.n(), self.n));
        }
        let index = self.inputs.len();
        self.inputs.push(op.clone());
        let mut v = vec_of(op);
        let mut coeffs = self.reduce(&mut v);
        match lowest_bit(&v) {
            None => Ok(Extend::Dependent { index, coeffs: bits_of(&coeffs) }),
            Some(pivot) => {
                set_bit(&mut coeffs, index);
                let pos = self.rows.partition_point(|r| r.pivot < pivot);
                self.rows.insert(pos, Row { v, pivot, coeffs });
                Ok(Extend::Added { index })
            }
        }
    }

    /// Indices of inserted operators whose phase-stripped product is `op`.
    pub fn in_span(&self, op: &Pauli) -> Result<Option<Vec<usize>>> {
        if op.n() != self.n {
            return Err(Error::Dimension(op.n(), self.n));
        }
        let mut v = vec_of(op);
        let coeffs = self.reduce(&mut v);
        Ok(if v.iter().all(|&w| w == 0) { Some(bits_of(&coeffs)) } else { None })
    }

    pub fn contains(&self, op: &Pauli) -> bool {
        matches!(self.in_span(op), Ok(Some(_)))
    }

    /// Exact product of the selected inputs, in index order.
    pub fn signed_product(&self, coeffs: &[usize]) -> Pauli {
        let mut acc = Pauli::identity(self.n);
        for &c in coeffs {
            acc.mul_assign_unchecked(&self.inputs[c]);
        }
        acc
    }
}

/// Rank of a list of operators.
pub fn rank_of(ops: &[Pauli]) -> usize {
    match ops.first() {
        None => 0,
        Some(p) => SymplecticBasis::from_ops(p.n(), ops).map(|b| b.rank()).unwrap_or(0),
    }
}

/// XOR basis over `u128` vectors indexed by the highest set bit.
#[derive(Clone, Debug)]
pub struct XorBasis128 {
    slots: Vec<u128>,
    present: u128,
    log: Vec<u8>,
}

impl Default for XorBasis128 {
    fn default() -> Self {
        XorBasis128::new()
    }
}

impl XorBasis128 {
    pub fn new() -> XorBasis128 {
        XorBasis128 { slots: vec![0; 128], present: 0, log: Vec::with_capacity(128) }
    }

    #[inline]
    pub fn reduce(&self, mut v: u128) -> u128 {
        while v != 0 {
            let h = 127 - v.leading_zeros() as usize;
            if (self.present >> h) & 1 == 0 {
                return v;
            }
            v ^= self.slots[h];
        }
        0
    }

    #[inline]
    pub fn contains(&self, v: u128) -> bool {
        self.reduce(v) == 0
    }

    /// Inserts `v`; returns whether the rank grew.
    #[inline]
    pub fn insert(&mut self, v: u128) -> bool {
        let r = self.reduce(v);
        if r == 0 {
            return false;
        }
        let h = 127 - r.leading_zeros() as usize;
        self.slots[h] = r;
        self.present |= 1u128 << h;
        self.log.push(h as u8);
        true
    }

    pub fn rank(&self) -> usize {
        self.log.len()
    }

    /// Marker for [`XorBasis128::undo_to`].
    #[inline]
    pub fn mark(&self) -> usize {
        self.log.len()
    }

    #[inline]
    pub fn undo_to(&mut self, mark: usize) {
        while self.log.len() > mark {
            let h = self.log.pop().unwrap();
            self.present &= !(1u128 << h);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Pauli {
        s.parse().unwrap()
    }

    #[test]
    fn span_examples() {
        let b = SymplecticBasis::from_ops(4, &[p("XIII"), p("IXII"), p("IIZZ")]).unwrap();
        assert_eq!(b.in_span(&p("XXII")).unwrap(), Some(vec![0, 1]));
        let b2 = SymplecticBasis::from_ops(4, &[p("XXII"), p("IIXX")]).unwrap();
        assert_eq!(b2.in_span(&p("XXXX")).unwrap(), Some(vec![0, 1]));
        let b3 = SymplecticBasis::from_ops(4, &[p("XIII"), p("IXII")]).unwrap();
        assert_eq!(b3.in_span(&p("ZIII")).unwrap(), None);
    }

    #[test]
    fn dependent_insert_reports_decomposition() {
        let mut b = SymplecticBasis::new(3);
        b.extend(&p("XXI")).unwrap();
        b.extend(&p("IXX")).unwrap();
        assert_eq!(b.extend(&p("XIX")).unwrap(), Extend::Dependent { index: 2, coeffs: vec![0, 1] });
        assert_eq!(b.rank(), 2);
        let prod = b.signed_product(&[0, 1]);
        assert_eq!(prod, p("XIX"));
    }

    #[test]
    fn pivots_increase() {
        let b = SymplecticBasis::from_ops(3, &[p("IIZ"), p("XII"), p("IZI"), p("XZZ")]).unwrap();
        let piv = b.pivots();
        assert!(piv.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(b.rank(), 3);
    }

    #[test]
    fn xor_basis_undo() {
        let mut b = XorBasis128::new();
        assert!(b.insert(0b011));
        let m = b.mark();
        assert!(b.insert(0b110));
        assert!(b.contains(0b101));
        b.undo_to(m);
        assert!(!b.contains(0b101));
        assert!(b.contains(0b011));
        assert!(!b.insert(0b011));
    }
}

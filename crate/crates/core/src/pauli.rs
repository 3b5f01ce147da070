//! n-qubit Pauli operators with exact phase.
//!
//! An operator is stored as `i^phase · σ(x_0,z_0) ⊗ … ⊗ σ(x_{n-1},z_{n-1})`
//! where `σ(1,0) = X`, `σ(0,1) = Z` and `σ(1,1) = Y` (the Hermitian Y, not
//! `XZ`). With this convention a Hermitian operator carries phase 0 or 2,
//! i.e. a sign of +1 or −1.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub const PAULIS: [Letter; 3] = [Letter::X, Letter::Y, Letter::Z];

    pub fn from_bits(x: bool, z: bool) -> Letter {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub fn commutes_with(self, other: Letter) -> bool {
        self == Letter::I || other == Letter::I || self == other
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c.to_ascii_uppercase() {
            'I' | '_' | '.' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pauli {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: u8,
}

impl Pauli {
    pub fn identity(n: usize) -> Pauli {
        let w = words_for(n);
        Pauli { n, x: vec![0; w], z: vec![0; w], phase: 0 }
    }

    pub fn single(n: usize, site: usize, letter: Letter) -> Pauli {
        let mut p = Pauli::identity(n);
        p.set_letter(site, letter);
        p
    }

    /// Product of the same letter on every listed site.
    pub fn on_sites(n: usize, sites: impl IntoIterator<Item = usize>, letter: Letter) -> Pauli {
        let mut p = Pauli::identity(n);
        for s in sites {
            p.set_letter(s, letter);
        }
        p
    }

    pub fn from_letters(letters: &[Letter]) -> Pauli {
        let mut p = Pauli::identity(letters.len());
        for (j, &l) in letters.iter().enumerate() {
            p.set_letter(j, l);
        }
        p
    }

    /// Builds an operator from raw symplectic words (bits beyond `n` are masked).
    pub fn from_words(n: usize, x: &[u64], z: &[u64], phase: u8) -> Pauli {
        let w = words_for(n);
        let mut p = Pauli { n, x: x[..w].to_vec(), z: z[..w].to_vec(), phase: phase & 3 };
        p.mask_tail();
        p
    }

    fn mask_tail(&mut self) {
        let r = self.n % 64;
        if r != 0 {
            let m = (1u64 << r) - 1;
            if let Some(last) = self.x.last_mut() {
                *last &= m;
            }
            if let Some(last) = self.z.last_mut() {
                *last &= m;
            }
        }
    }

    pub fn parse(s: &str) -> Result<Pauli> {
        s.parse()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    /// +1 / −1 for Hermitian operators, `None` for ±i multiples.
    pub fn sign(&self) -> Option<i8> {
        match self.phase {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn with_sign(mut self, sign: i8) -> Pauli {
        self.phase = if sign < 0 { 2 } else { 0 };
        self
    }

    pub fn negated(mut self) -> Pauli {
        self.phase = (self.phase + 2) & 3;
        self
    }

    /// The same operator with phase dropped (element of the effective group).
    pub fn stripped(&self) -> Pauli {
        Pauli { phase: 0, ..self.clone() }
    }

    pub fn letter(&self, j: usize) -> Letter {
        let (w, b) = (j / 64, j % 64);
        Letter::from_bits((self.x[w] >> b) & 1 == 1, (self.z[w] >> b) & 1 == 1)
    }

    pub fn set_letter(&mut self, j: usize, l: Letter) {
        assert!(j < self.n, "site {j} out of range for {} qubits", self.n);
        let (w, b) = (j / 64, j % 64);
        let (x, z) = l.bits();
        self.x[w] = (self.x[w] & !(1 << b)) | ((x as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((z as u64) << b);
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.n).map(|j| self.letter(j)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(self.z.iter()).all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).map(|(a, b)| (a | b).count_ones() as usize).sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&j| self.letter(j) != Letter::I).collect()
    }

    fn check_dim(&self, other: &Pauli) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension(self.n, other.n));
        }
        Ok(())
    }

    /// Group product `self · other` with exact phase.
    pub fn multiply(&self, other: &Pauli) -> Result<Pauli> {
        self.check_dim(other)?;
        let mut out = self.clone();
        out.mul_assign_unchecked(other);
        Ok(out)
    }

    /// Phase-stripped product (XOR of the symplectic vectors).
    pub fn stripped_product(&self, other: &Pauli) -> Result<Pauli> {
        self.check_dim(other)?;
        let mut out = self.stripped();
        for (a, b) in out.x.iter_mut().zip(&other.x) {
            *a ^= b;
        }
        for (a, b) in out.z.iter_mut().zip(&other.z) {
            *a ^= b;
        }
        Ok(out)
    }

    /// In-place right multiplication; callers guarantee equal `n`.
    pub(crate) fn mul_assign_unchecked(&mut self, other: &Pauli) {
        let mut plus = 0u32;
        let mut minus = 0u32;
        for k in 0..self.x.len() {
            let (ax, az, bx, bz) = (self.x[k], self.z[k], other.x[k], other.z[k]);
            let (a_x, a_y, a_z) = (ax & !az, ax & az, !ax & az);
            let (b_x, b_y, b_z) = (bx & !bz, bx & bz, !bx & bz);
            plus += ((a_x & b_y) | (a_y & b_z) | (a_z & b_x)).count_ones();
            minus += ((a_y & b_x) | (a_z & b_y) | (a_x & b_z)).count_ones();
            self.x[k] = ax ^ bx;
            self.z[k] = az ^ bz;
        }
        self.phase = ((self.phase as u32 + other.phase as u32 + plus + 4 * minus - minus) & 3) as u8;
    }

    pub fn commutes(&self, other: &Pauli) -> Result<bool> {
        self.check_dim(other)?;
        Ok(self.commutes_unchecked(other))
    }

    #[inline]
    pub(crate) fn commutes_unchecked(&self, other: &Pauli) -> bool {
        let mut acc = 0u32;
        for k in 0..self.x.len() {
            acc += ((self.x[k] & other.z[k]) ^ (self.z[k] & other.x[k])).count_ones();
        }
        acc % 2 == 0
    }

    pub fn anticommute_positions(&self, other: &Pauli) -> Result<Vec<usize>> {
        self.check_dim(other)?;
        let mut out = Vec::new();
        for k in 0..self.x.len() {
            let mut w = (self.x[k] & other.z[k]) ^ (self.z[k] & other.x[k]);
            while w != 0 {
                out.push(k * 64 + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        Ok(out)
    }

    /// Anticommuting-site counts on `[0, split)` and `[split, n)`.
    pub fn anticommute_count_by_block(&self, other: &Pauli, split: usize) -> Result<(usize, usize)> {
        if split == 0 || split >= self.n {
            return Err(Error::InvalidSplit { split, n: self.n });
        }
        let pos = self.anticommute_positions(other)?;
        let left = pos.iter().filter(|&&j| j < split).count();
        Ok((left, pos.len() - left))
    }

    /// `self ⊗ other` on `n + other.n` qubits.
    pub fn tensor(&self, other: &Pauli) -> Pauli {
        let n = self.n + other.n;
        let mut p = Pauli::identity(n);
        for j in 0..self.n {
            p.set_letter(j, self.letter(j));
        }
        for j in 0..other.n {
            p.set_letter(self.n + j, other.letter(j));
        }
        p.phase = (self.phase + other.phase) & 3;
        p
    }

    /// Restriction to the sites `[start, start + len)`, phase dropped.
    pub fn block(&self, start: usize, len: usize) -> Pauli {
        let mut p = Pauli::identity(len);
        for j in 0..len {
            p.set_letter(j, self.letter(start + j));
        }
        p
    }

    /// Drops the listed sites (which must carry identity), keeping the phase.
    pub fn remove_sites(&self, sites: &[usize]) -> Pauli {
        let keep: Vec<usize> = (0..self.n).filter(|j| !sites.contains(j)).collect();
        let mut p = Pauli::identity(keep.len());
        for (k, &j) in keep.iter().enumerate() {
            p.set_letter(k, self.letter(j));
        }
        p.phase = self.phase;
        p
    }

    /// Packs into `x | z << 64` for operators on at most 64 qubits.
    pub fn to_u128(&self) -> u128 {
        assert!(self.n <= 64, "u128 packing supports at most 64 qubits");
        (self.x[0] as u128) | ((self.z[0] as u128) << 64)
    }

    pub fn from_u128(n: usize, v: u128) -> Pauli {
        Pauli::from_words(n, &[v as u64], &[(v >> 64) as u64], 0)
    }

    /// Renders with a space after each block of `split` sites.
    pub fn display_split(&self, split: usize) -> String {
        let mut s = String::from(self.prefix());
        for j in 0..self.n {
            if split > 0 && j > 0 && j % split == 0 {
                s.push(' ');
            }
            s.push(self.letter(j).as_char());
        }
        s
    }

    fn prefix(&self) -> &'static str {
        match self.phase {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.prefix())?;
        for j in 0..self.n {
            write!(f, "{}", self.letter(j))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Pauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Pauli> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        // a lowercase `i` right after the sign is the phase; letters are uppercase
        let (phase, body) = if let Some(r) = t.strip_prefix("+i") {
            (1, r)
        } else if let Some(r) = t.strip_prefix("-i") {
            (3, r)
        } else if let Some(r) = t.strip_prefix('+') {
            (0, r)
        } else if let Some(r) = t.strip_prefix('-') {
            (2, r)
        } else {
            (0, t.as_str())
        };
        if body.is_empty() {
            return Err(Error::Parse(s.to_string()));
        }
        let letters = body
            .chars()
            .map(Letter::from_char)
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Parse(s.to_string()))?;
        let mut p = Pauli::from_letters(&letters);
        p.phase = phase;
        Ok(p)
    }
}

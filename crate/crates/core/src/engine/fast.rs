//! Fixed-width tableau and record inference for registers of at most 128 qubits.
//!
//! Same semantics as [`StabilizerState`] and [`LogicalInference`], without
//! heap-allocated Paulis; the Monte-Carlo loop spends nearly all of its time here.

use rand::Rng;

use crate::error::{Error, Result};
use crate::pauli::Pauli;
use crate::stabilizer::{LogicalClass, LogicalKnowledge, Origin, StabilizerState};
use crate::StabilizerCode;

pub(crate) const MAX_QUBITS: usize = 128;

/// Pauli on ≤ 128 qubits: `i^ph` times the letters encoded by `(x, z)`, Y = (1, 1).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct P128 {
    pub x: u128,
    pub z: u128,
    pub ph: u8,
}

impl P128 {
    pub fn from_pauli(p: &Pauli) -> P128 {
        debug_assert!(p.n() <= MAX_QUBITS);
        let w = |ws: &[u64]| ws.iter().take(2).enumerate().fold(0u128, |a, (i, &v)| a | (v as u128) << (64 * i));
        P128 { x: w(p.x_words()), z: w(p.z_words()), ph: p.phase() }
    }

    pub fn to_pauli(self, n: usize) -> Pauli {
        let words = n.div_ceil(64);
        let split = |v: u128| [v as u64, (v >> 64) as u64];
        Pauli::from_words(n, &split(self.x)[..words], &split(self.z)[..words], self.ph)
    }

    pub fn with_sign(mut self, s: i8) -> P128 {
        self.ph = if s > 0 { 0 } else { 2 };
        self
    }

    #[inline]
    pub fn mul_assign(&mut self, o: &P128) {
        let (ax, az, bx, bz) = (self.x, self.z, o.x, o.z);
        let (a_x, a_y, a_z) = (ax & !az, ax & az, !ax & az);
        let (b_x, b_y, b_z) = (bx & !bz, bx & bz, !bx & bz);
        let plus = ((a_x & b_y) | (a_y & b_z) | (a_z & b_x)).count_ones();
        let minus = ((a_y & b_x) | (a_z & b_y) | (a_x & b_z)).count_ones();
        self.x = ax ^ bx;
        self.z = az ^ bz;
        self.ph = ((self.ph as u32 + o.ph as u32 + plus + 3 * minus) & 3) as u8;
    }

    /// Product up to phase; destabilizer phases are never read.
    #[inline]
    pub fn xor_assign(&mut self, o: &P128) {
        self.x ^= o.x;
        self.z ^= o.z;
    }

    /// `+1` when `self` equals `target` including phase, `-1` when they differ by a sign.
    pub fn sign_against(&self, target: &P128) -> i8 {
        if (self.ph + 4 - target.ph) % 4 == 0 {
            1
        } else {
            -1
        }
    }
}

fn logical_bits(t: Origin) -> (bool, bool) {
    match t {
        Origin::LogicalX => (true, false),
        Origin::LogicalZ => (false, true),
        Origin::LogicalY => (true, true),
        _ => (false, false),
    }
}


#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum FastClass {
    Anticommuting(usize),
    /// Commutes with everything; `reveals` is the logical class the outcome carries.
    Determined { reveals: Option<LogicalClass> },
    Forbidden(usize),
}

/// Row-major tableau plus column bitmasks over the rows. The measured
/// observables have weight one or two, so the anticommuting rows come from a
/// couple of column lookups and only rows that change are touched.
#[derive(Clone, Debug)]
pub(crate) struct FastState {
    stabs: Vec<P128>,
    destabs: Vec<P128>,
    sx: Vec<u128>,
    sz: Vec<u128>,
    dx: Vec<u128>,
    dz: Vec<u128>,
    /// Rows carrying a logical X (resp. Z) component.
    lx: u128,
    lz: u128,
}

fn bits(mut w: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (w != 0).then(|| {
            let q = w.trailing_zeros() as usize;
            w &= w - 1;
            q
        })
    })
}

/// Rows (as a mask) whose Pauli anticommutes with `obs`.
fn anti(cx: &[u128], cz: &[u128], obs: &P128) -> u128 {
    let mut m = 0;
    for q in bits(obs.z) {
        m ^= cx[q];
    }
    for q in bits(obs.x) {
        m ^= cz[q];
    }
    m
}

fn toggle(cx: &mut [u128], cz: &mut [u128], row: usize, dx: u128, dz: u128) {
    let b = 1u128 << row;
    for q in bits(dx) {
        cx[q] ^= b;
    }
    for q in bits(dz) {
        cz[q] ^= b;
    }
}

fn parity(w: u128) -> bool {
    w.count_ones() % 2 == 1
}

impl FastState {
    pub fn from_state(s: &StabilizerState) -> Result<FastState> {
        if s.n() > MAX_QUBITS {
            return Err(Error::Unsupported(format!("fast tableau holds at most {MAX_QUBITS} qubits, state has {}", s.n())));
        }
        let (stabs, destabs, tags) = s.tableau();
        let n = s.n();
        let mut st = FastState {
            stabs: stabs.iter().map(P128::from_pauli).collect(),
            destabs: destabs.iter().map(P128::from_pauli).collect(),
            sx: vec![0; n],
            sz: vec![0; n],
            dx: vec![0; n],
            dz: vec![0; n],
            lx: 0,
            lz: 0,
        };
        for i in 0..st.stabs.len() {
            let (g, d) = (st.stabs[i], st.destabs[i]);
            toggle(&mut st.sx, &mut st.sz, i, g.x, g.z);
            toggle(&mut st.dx, &mut st.dz, i, d.x, d.z);
            let (a, b) = logical_bits(tags[i]);
            st.lx |= (a as u128) << i;
            st.lz |= (b as u128) << i;
        }
        Ok(st)
    }

    /// Copies `other` into `self`, reusing the allocations.
    pub fn load(&mut self, other: &FastState) {
        self.stabs.clone_from(&other.stabs);
        self.destabs.clone_from(&other.destabs);
        self.sx.clone_from(&other.sx);
        self.sz.clone_from(&other.sz);
        self.dx.clone_from(&other.dx);
        self.dz.clone_from(&other.dz);
        self.lx = other.lx;
        self.lz = other.lz;
    }

    pub fn reset_logicals(&mut self, l_x: i8, l_z: i8) {
        for i in bits(self.lx & !self.lz) {
            self.stabs[i] = self.stabs[i].with_sign(l_x);
        }
        for i in bits(self.lz & !self.lx) {
            self.stabs[i] = self.stabs[i].with_sign(l_z);
        }
    }

    #[cfg(test)]
    pub fn classify(&self, obs: &P128) -> FastClass {
        self.class_of(anti(&self.sx, &self.sz, obs), obs)
    }

    fn class_of(&self, a: u128, obs: &P128) -> FastClass {
        let logical = self.lx | self.lz;
        if a & !logical != 0 {
            return FastClass::Anticommuting((a & !logical).trailing_zeros() as usize);
        }
        if a != 0 {
            return FastClass::Forbidden(a.trailing_zeros() as usize);
        }
        let d = anti(&self.dx, &self.dz, obs);
        let reveals = match (parity(d & self.lx), parity(d & self.lz)) {
            (true, false) => Some(LogicalClass::X),
            (false, true) => Some(LogicalClass::Z),
            (true, true) => Some(LogicalClass::Y),
            _ => None,
        };
        FastClass::Determined { reveals }
    }

    /// Sign of a determined observable and whether its value carries logical information.
    fn determined(&self, obs: &P128) -> (i8, bool) {
        let d = anti(&self.dx, &self.dz, obs);
        let mut prod = P128::default();
        for i in bits(d) {
            prod.mul_assign(&self.stabs[i]);
        }
        debug_assert_eq!((prod.x, prod.z), (obs.x, obs.z));
        (prod.sign_against(obs), parity(d & self.lx) || parity(d & self.lz))
    }

    /// Classifies `XX`, `YY`, `ZZ` on one pair; `xx` and `zz` are the two
    /// products, `yy` their product.
    pub fn classify_pair(&self, ops: &[P128; 3]) -> [FastClass; 3] {
        let ax = anti(&self.sx, &self.sz, &ops[0]);
        let az = anti(&self.sx, &self.sz, &ops[2]);
        let masks = [ax, ax ^ az, az];
        std::array::from_fn(|k| self.class_of(masks[k], &ops[k]))
    }

    /// Measures `obs`, carrying out forbidden measurements. Returns the outcome,
    /// whether it was forbidden, and whether it can add to what the record
    /// determines (false only for determined outcomes without logical content).
    pub fn measure<R: Rng + ?Sized>(&mut self, obs: &P128, rng: &mut R) -> (i8, bool, bool) {
        let a = anti(&self.sx, &self.sz, obs);
        if a == 0 {
            let (sign, informative) = self.determined(obs);
            return (sign, false, informative);
        }
        let ordinary = a & !(self.lx | self.lz);
        let forbidden = ordinary == 0;
        let p = if forbidden { a.trailing_zeros() } else { ordinary.trailing_zeros() } as usize;
        let out = if rng.gen::<bool>() { 1 } else { -1 };
        self.replace(p, a, obs, out, forbidden);
        (out, forbidden, true)
    }

    /// `a` is the mask of stabilizer rows anticommuting with `obs`.
    fn replace(&mut self, p: usize, a: u128, obs: &P128, outcome: i8, forbidden: bool) {
        let survivor = self.stabs[p];
        let pb = 1u128 << p;
        let others = a & !pb;
        for i in bits(others) {
            self.stabs[i].mul_assign(&survivor);
            toggle(&mut self.sx, &mut self.sz, i, survivor.x, survivor.z);
        }
        // with a forbidden observable, every anticommuting generator is logical
        if forbidden {
            if self.lx & pb != 0 {
                self.lx ^= others;
            }
            if self.lz & pb != 0 {
                self.lz ^= others;
            }
        }
        let d = anti(&self.dx, &self.dz, obs) & !pb;
        for i in bits(d) {
            self.destabs[i].xor_assign(&survivor);
            toggle(&mut self.dx, &mut self.dz, i, survivor.x, survivor.z);
        }
        let old = self.destabs[p];
        toggle(&mut self.dx, &mut self.dz, p, old.x ^ survivor.x, old.z ^ survivor.z);
        self.destabs[p] = survivor;
        toggle(&mut self.sx, &mut self.sz, p, survivor.x ^ obs.x, survivor.z ^ obs.z);
        self.stabs[p] = obs.with_sign(outcome);
        self.lx &= !pb;
        self.lz &= !pb;
    }
}

/// Echelon row: the code-stabilizer part and the record part are kept apart
/// so each product is taken among commuting factors only.
#[derive(Clone, Copy, Debug, Default)]
struct Row {
    g: P128,
    m: P128,
}

/// Rows indexed by pivot. An X-pivot row has no X bits below its pivot; a
/// Z-pivot row has no X bits at all and no Z bits below its pivot. Clearing
/// pivots lowest-first therefore never revisits a cleared position.
#[derive(Clone, Debug)]
pub(crate) struct FastInference {
    x_rows: Box<[Row; 128]>,
    z_rows: Box<[Row; 128]>,
    x_mask: u128,
    z_mask: u128,
    reps: [(LogicalClass, P128); 3],
}

impl FastInference {
    pub fn new(c1: &StabilizerCode, c2: &StabilizerCode) -> Result<FastInference> {
        let (n1, n2) = (c1.n(), c2.n());
        if n1 + n2 > MAX_QUBITS {
            return Err(Error::Unsupported(format!("fast inference holds at most {MAX_QUBITS} qubits")));
        }
        let mut inf = FastInference {
            x_rows: Box::new([Row::default(); 128]),
            z_rows: Box::new([Row::default(); 128]),
            x_mask: 0,
            z_mask: 0,
            reps: [(LogicalClass::X, P128::default()); 3],
        };
        for g in c1.generators() {
            inf.insert(P128::from_pauli(&g.tensor(&Pauli::identity(n2))), P128::default());
        }
        for g in c2.generators() {
            inf.insert(P128::from_pauli(&Pauli::identity(n1).tensor(g)), P128::default());
        }
        let xx = c1.logical_x().tensor(c2.logical_x());
        let zz = c1.logical_z().tensor(c2.logical_z());
        let yy = xx.multiply(&zz)?.negated();
        inf.reps = [
            (LogicalClass::X, P128::from_pauli(&xx)),
            (LogicalClass::Y, P128::from_pauli(&yy)),
            (LogicalClass::Z, P128::from_pauli(&zz)),
        ];
        Ok(inf)
    }

    /// Reduces `g·m` against the rows; the residual parts and its `(x, z)` support.
    fn reduce(&self, mut g: P128, mut m: P128) -> (P128, P128, u128, u128) {
        let (mut x, mut z) = (g.x ^ m.x, g.z ^ m.z);
        loop {
            let hit = x & self.x_mask;
            if hit == 0 {
                break;
            }
            let r = &self.x_rows[hit.trailing_zeros() as usize];
            g.mul_assign(&r.g);
            m.mul_assign(&r.m);
            x ^= r.g.x ^ r.m.x;
            z ^= r.g.z ^ r.m.z;
        }
        if x != 0 {
            return (g, m, x, z);
        }
        loop {
            let hit = z & self.z_mask;
            if hit == 0 {
                break;
            }
            let r = &self.z_rows[hit.trailing_zeros() as usize];
            g.mul_assign(&r.g);
            m.mul_assign(&r.m);
            z ^= r.g.z ^ r.m.z;
        }
        (g, m, x, z)
    }

    fn insert(&mut self, g: P128, m: P128) {
        let (g, m, x, z) = self.reduce(g, m);
        if x != 0 {
            let q = x.trailing_zeros();
            self.x_rows[q as usize] = Row { g, m };
            self.x_mask |= 1 << q;
        } else if z != 0 {
            let q = z.trailing_zeros();
            self.z_rows[q as usize] = Row { g, m };
            self.z_mask |= 1 << q;
        }
    }

    /// Copies `other` into `self`; only occupied rows are copied.
    pub fn load(&mut self, other: &FastInference) {
        for (mask, dst, src) in [(other.x_mask, &mut self.x_rows, &other.x_rows), (other.z_mask, &mut self.z_rows, &other.z_rows)] {
            let mut w = mask;
            while w != 0 {
                let q = w.trailing_zeros() as usize;
                dst[q] = src[q];
                w &= w - 1;
            }
        }
        self.x_mask = other.x_mask;
        self.z_mask = other.z_mask;
        self.reps = other.reps;
    }

    pub fn push_record(&mut self, obs: P128, outcome: i8) {
        self.insert(P128::default(), obs.with_sign(outcome));
    }

    pub fn knowledge(&self) -> LogicalKnowledge {
        let mut k = LogicalKnowledge::default();
        for (class, rep) in &self.reps {
            let (mut g, m, x, z) = self.reduce(*rep, P128::default());
            if x | z != 0 {
                continue;
            }
            // rep·g_red·m_red ∝ I, so rep = ± g_red·m_red up to the factors' phases
            g.mul_assign(&m);
            let v = Some(g.sign_against(&P128 { x: 0, z: 0, ph: 0 }));
            match class {
                LogicalClass::X => k.x = v,
                LogicalClass::Y => k.y = v,
                LogicalClass::Z => k.z = v,
            }
        }
        k
    }
}

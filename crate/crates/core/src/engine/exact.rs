//! Exact success probabilities by enumeration of physical-BM outcomes.
//!
//! Runs in the single-code picture with symplectic vectors packed into
//! `u128` (at most 64 qubits). A success on a pair contributes both X and Z
//! on that site, a failure contributes the scheme's basis. The logical BM
//! succeeds once X̄ and Z̄ both lie in the span of the code stabilizers and
//! the contributed single-qubit operators.
//!
//! Adaptive schemes only branch until the first success; static schemes are
//! a depth-first search over all patterns with an undo log, cut short as soon
//! as a prefix already succeeds (every completion then counts).

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::XorBasis128;
use crate::pauli::{Letter, Pauli};
use crate::prob;
use crate::scheme::AnyScheme;

pub const DEFAULT_CAP: usize = 26;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Known {
    pub x: bool,
    pub y: bool,
    pub z: bool,
}

impl Known {
    pub fn count(&self) -> usize {
        self.x as usize + self.y as usize + self.z as usize
    }

    pub fn complete(&self) -> bool {
        self.count() >= 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LedgerEntry {
    /// Success/failure per attempted BM along the decision path.
    pub pattern: Vec<bool>,
    pub success: bool,
    pub known: Known,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactResult {
    pub probability: BigRational,
    /// `counts[k][f]`: successful decision paths with `k` BM successes and `f` failures.
    pub counts: Vec<Vec<u64>>,
    pub attempts: usize,
    pub ledger: Option<Vec<LedgerEntry>>,
}

impl ExactResult {
    /// Re-weights the stored path counts at another `P_B`.
    pub fn probability_at(&self, p_b: &BigRational) -> BigRational {
        weigh(&self.counts, p_b)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ExactOptions {
    pub cap: usize,
    pub workers: usize,
    /// Keep one ledger entry per decision path (at most 2^16 of them).
    pub ledger: bool,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions { cap: DEFAULT_CAP, workers: 1, ledger: false }
    }
}

fn weigh(counts: &[Vec<u64>], p_b: &BigRational) -> BigRational {
    let q = BigRational::from_integer(1.into()) - p_b;
    let mut total = BigRational::zero();
    for (k, row) in counts.iter().enumerate() {
        for (f, &c) in row.iter().enumerate() {
            if c != 0 {
                total += BigRational::from_integer(c.into()) * prob::pow(p_b, k) * prob::pow(&q, f);
            }
        }
    }
    total
}

/// Single-code data of a scheme, packed for the enumerator.
struct Packed {
    n: usize,
    gens: XorBasis128,
    lx: u128,
    lz: u128,
    fail: Vec<u128>,
    x_at: Vec<u128>,
    z_at: Vec<u128>,
    /// `completion[j][t]`: operator measured at `t > j` after the first success at `j`.
    completion: Option<Vec<Vec<u128>>>,
}

impl Packed {
    fn new(scheme: &AnyScheme) -> Result<Packed> {
        let code = scheme.code();
        let n = code.n();
        if n > 64 {
            return Err(Error::Unsupported(format!("exact enumeration is limited to 64 qubits, code has {n}")));
        }
        let mut gens = XorBasis128::new();
        for g in code.generators() {
            gens.insert(g.to_u128());
        }
        let order = scheme.order();
        let single = |s: usize, l: Letter| Pauli::single(n, s, l).to_u128();
        let fail = (0..n).map(|t| single(order[t], scheme.basis_at(t))).collect();
        let x_at = order.iter().map(|&s| single(s, Letter::X)).collect();
        let z_at = order.iter().map(|&s| single(s, Letter::Z)).collect();
        let completion = match scheme {
            AnyScheme::Adaptive(a) => {
                Some((0..n).map(|j| (0..n).map(|t| if t > j { single(order[t], a.completion_letter(j, t)) } else { 0 }).collect::<Vec<u128>>()).collect())
            }
            AnyScheme::Static(_) => None,
        };
        Ok(Packed { n, gens, lx: code.logical_x().to_u128(), lz: code.logical_z().to_u128(), fail, x_at, z_at, completion })
    }

    fn known(&self, b: &XorBasis128) -> Known {
        Known { x: b.contains(self.lx), y: b.contains(self.lx ^ self.lz), z: b.contains(self.lz) }
    }

    fn done(&self, b: &XorBasis128) -> bool {
        b.contains(self.lx) && b.contains(self.lz)
    }

    /// Determination for one outcome pattern; bits after the first success of
    /// an adaptive scheme are ignored.
    fn evaluate(&self, pattern: &[bool]) -> (Known, Vec<bool>) {
        let mut b = self.gens.clone();
        let mut path = Vec::new();
        let mut first: Option<usize> = None;
        for t in 0..self.n {
            if let (Some(j), Some(comp)) = (first, &self.completion) {
                b.insert(comp[j][t]);
                continue;
            }
            path.push(pattern[t]);
            if pattern[t] {
                b.insert(self.x_at[t]);
                b.insert(self.z_at[t]);
                first.get_or_insert(t);
            } else {
                b.insert(self.fail[t]);
            }
        }
        (self.known(&b), path)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternOutcome {
    pub known: Known,
    pub success: bool,
    /// The bits that were actually attempted BMs on the decision path.
    pub path: Vec<bool>,
}

/// Single-code determination for a forced success/failure pattern of length `n`.
pub fn evaluate_pattern(scheme: &AnyScheme, pattern: &[bool]) -> Result<PatternOutcome> {
    let p = Packed::new(scheme)?;
    if pattern.len() != p.n {
        return Err(Error::InvalidParams(format!("pattern of length {} for {} positions", pattern.len(), p.n)));
    }
    let (known, path) = p.evaluate(pattern);
    Ok(PatternOutcome { known, success: known.complete(), path })
}

/// Whether the all-failure pattern leaves at most one logical class known.
pub fn necessity_check(scheme: &AnyScheme) -> Result<bool> {
    let out = evaluate_pattern(scheme, &vec![false; scheme.n()])?;
    Ok(!out.success && out.known.count() <= 1)
}

fn binomials(n: usize) -> Vec<Vec<u64>> {
    let mut c = vec![vec![0u64; n + 1]; n + 1];
    for i in 0..=n {
        c[i][0] = 1;
        for k in 1..=i {
            c[i][k] = c[i - 1][k - 1] + c[i - 1][k];
        }
    }
    c
}

struct Counter<'a> {
    p: &'a Packed,
    binom: &'a [Vec<u64>],
    counts: Vec<Vec<u64>>,
}

impl Counter<'_> {
    fn dfs(&mut self, pos: usize, k: usize, b: &mut XorBasis128) {
        let n = self.p.n;
        if self.p.done(b) {
            let rem = n - pos;
            for i in 0..=rem {
                self.counts[k + i][pos - k + rem - i] += self.binom[rem][i];
            }
            return;
        }
        if pos == n {
            return;
        }
        let mark = b.mark();
        b.insert(self.p.x_at[pos]);
        b.insert(self.p.z_at[pos]);
        self.dfs(pos + 1, k + 1, b);
        b.undo_to(mark);
        b.insert(self.p.fail[pos]);
        self.dfs(pos + 1, k, b);
        b.undo_to(mark);
    }
}

fn static_counts(p: &Packed, workers: usize) -> Result<Vec<Vec<u64>>> {
    let n = p.n;
    let binom = binomials(n);
    let depth = if workers > 1 { n.min(10) } else { 0 };
    // prefixes of length `depth` that are not already decided
    let mut tasks: Vec<(usize, XorBasis128)> = Vec::new();
    let mut head = Counter { p, binom: &binom, counts: vec![vec![0; n + 1]; n + 1] };
    for bits in 0u32..(1u32 << depth) {
        let mut b = p.gens.clone();
        let mut k = 0;
        let mut decided = false;
        for pos in 0..depth {
            if p.done(&b) {
                // counted once, from the all-zero continuation of this prefix
                if bits >> pos == 0 {
                    let rem = n - pos;
                    for i in 0..=rem {
                        head.counts[k + i][pos - k + rem - i] += binom[rem][i];
                    }
                }
                decided = true;
                break;
            }
            if bits >> pos & 1 == 1 {
                b.insert(p.x_at[pos]);
                b.insert(p.z_at[pos]);
                k += 1;
            } else {
                b.insert(p.fail[pos]);
            }
        }
        if !decided {
            tasks.push((k, b));
        }
    }
    let run = |(k, mut b): (usize, XorBasis128)| {
        let mut c = Counter { p, binom: &binom, counts: vec![vec![0; n + 1]; n + 1] };
        c.dfs(depth, k, &mut b);
        c.counts
    };
    let parts: Vec<Vec<Vec<u64>>> = if workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
        pool.install(|| tasks.into_par_iter().map(run).collect())
    } else {
        tasks.into_iter().map(run).collect()
    };
    let mut counts = head.counts;
    for part in parts {
        for (row, prow) in counts.iter_mut().zip(part) {
            for (a, b) in row.iter_mut().zip(prow) {
                *a += b;
            }
        }
    }
    Ok(counts)
}

fn adaptive_counts(p: &Packed) -> Vec<Vec<u64>> {
    let n = p.n;
    let mut counts = vec![vec![0u64; n + 1]; n + 1];
    for j in 0..=n {
        let pattern: Vec<bool> = (0..n).map(|t| t == j).collect();
        let (known, _) = p.evaluate(&pattern);
        if known.complete() {
            if j < n {
                counts[1][j] += 1;
            } else {
                counts[0][n] += 1;
            }
        }
    }
    counts
}

fn ledger(p: &Packed, adaptive: bool) -> Vec<LedgerEntry> {
    let n = p.n;
    let patterns: Vec<Vec<bool>> = if adaptive {
        (0..=n).map(|j| (0..n).map(|t| t == j).collect()).collect()
    } else {
        (0u64..1 << n).map(|bits| (0..n).map(|t| bits >> t & 1 == 1).collect()).collect()
    };
    patterns
        .into_iter()
        .map(|pat| {
            let (known, path) = p.evaluate(&pat);
            LedgerEntry { pattern: path, success: known.complete(), known }
        })
        .collect()
}

pub fn exact_success_probability(scheme: &AnyScheme, p_b: &BigRational, opts: ExactOptions) -> Result<ExactResult> {
    prob::check_probability(p_b)?;
    let attempts = scheme.n();
    if attempts > opts.cap {
        return Err(Error::CapExceeded { attempts, cap: opts.cap });
    }
    let p = Packed::new(scheme)?;
    let counts = if scheme.is_adaptive() { adaptive_counts(&p) } else { static_counts(&p, opts.workers.max(1))? };
    let ledger = (opts.ledger && (scheme.is_adaptive() || attempts <= 16)).then(|| ledger(&p, scheme.is_adaptive()));
    Ok(ExactResult { probability: weigh(&counts, p_b), counts, attempts, ledger })
}

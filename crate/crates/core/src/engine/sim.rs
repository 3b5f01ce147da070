//! Monte-Carlo tableau simulation of a scheme on the two-code Bell state.
//!
//! Each trial draws random logical Bell variables, runs the schedule on an
//! explicit stabilizer tableau (physical BMs as XX/ZZ on success, the product
//! `b⊗b` plus both single-qubit outcomes on failure) and asks the record alone
//! which logical classes it fixes. Trials are seeded by `(seed, trial index)`
//! so results do not depend on the worker count.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pauli::{Letter, Pauli};
use crate::prob;
use crate::scheme::AnyScheme;
use crate::stabilizer::{LogicalKnowledge, MeasurementRecord, RecordKind, StabilizerState};

use super::fast::{FastClass, FastInference, FastState, P128};

/// What to do when a modelling assumption does not hold in a trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Enforcement {
    /// Abort the trial with an error.
    Enforce,
    /// Carry on and count the event.
    Flag,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimPolicy {
    /// Each of XX, YY, ZZ on an attempted pair must be random or reveal a logical class.
    pub surrogate: Enforcement,
    /// Scheme-chosen measurements must not erase logical information before a success.
    pub forbidden: Enforcement,
}

impl SimPolicy {
    /// Strict for adaptive schemes; static schemes only count events.
    pub fn default_for(scheme: &AnyScheme) -> SimPolicy {
        if scheme.is_adaptive() {
            SimPolicy { surrogate: Enforcement::Enforce, forbidden: Enforcement::Enforce }
        } else {
            SimPolicy { surrogate: Enforcement::Flag, forbidden: Enforcement::Flag }
        }
    }
}

/// `P(success) = num / den` for a single physical BM.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bernoulli {
    num: u64,
    den: u64,
}

impl Bernoulli {
    pub fn new(p: &BigRational) -> Result<Bernoulli> {
        prob::check_probability(p)?;
        match (p.numer().to_u64(), p.denom().to_u64()) {
            (Some(num), Some(den)) => Ok(Bernoulli { num, den }),
            _ => Err(Error::Probability(format!("{p} is too fine-grained for sampling"))),
        }
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> bool {
        rng.gen_range(0..self.den) < self.num
    }
}

pub enum Outcomes<'a> {
    Random(Bernoulli),
    /// Success/failure per scheduled position.
    Forced(&'a [bool]),
}

#[derive(Clone, Debug)]
pub struct TrialResult {
    pub truth: (i8, i8),
    pub knowledge: LogicalKnowledge,
    qubits: usize,
    entries: Vec<(P128, i8, RecordKind)>,
    /// Outcomes of the attempted physical BMs.
    pub path: Vec<bool>,
    pub surrogate_flags: usize,
    pub forbidden_events: usize,
}

impl TrialResult {
    pub fn record(&self) -> MeasurementRecord {
        let mut r = MeasurementRecord::new();
        for &(obs, out, kind) in &self.entries {
            r.push_unchecked(obs.to_pauli(self.qubits), out, kind);
        }
        r
    }

    pub fn success(&self) -> bool {
        self.knowledge.known_count() >= 2
    }

    /// Any inferred value that disagrees with the prepared logical state.
    pub fn logical_error(&self) -> bool {
        knowledge_contradicts(&self.knowledge, self.truth)
    }
}

fn knowledge_contradicts(k: &LogicalKnowledge, (lx, lz): (i8, i8)) -> bool {
    k.x.is_some_and(|v| v != lx) || k.z.is_some_and(|v| v != lz) || k.y.is_some_and(|v| v != -lx * lz)
}

/// Per-site pair observables on the doubled register.
struct SiteOps {
    left: [P128; 3],
    right: [P128; 3],
    both: [P128; 3],
}

fn idx(l: Letter) -> usize {
    match l {
        Letter::X => 0,
        Letter::Y => 1,
        Letter::Z => 2,
        Letter::I => unreachable!("identity basis"),
    }
}

pub struct Simulator {
    scheme: AnyScheme,
    qubits: usize,
    template: FastState,
    ops: Vec<SiteOps>,
    inference: FastInference,
    policy: SimPolicy,
    /// Parent site, failure basis and (adaptive) completion letters per position.
    sites: Vec<usize>,
    bases: Vec<usize>,
    completion: Option<Vec<usize>>,
}

impl Simulator {
    pub fn new(scheme: &AnyScheme) -> Result<Simulator> {
        Simulator::with_policy(scheme, SimPolicy::default_for(scheme))
    }

    pub fn with_policy(scheme: &AnyScheme, policy: SimPolicy) -> Result<Simulator> {
        let parent = scheme.target().parent();
        let n = parent.n();
        let template = FastState::from_state(&StabilizerState::init_encoded_bell(parent, parent, 1, 1)?)?;
        let id = Pauli::identity(n);
        let ops = (0..n)
            .map(|s| {
                let one = |l| Pauli::single(n, s, l);
                let letters = [Letter::X, Letter::Y, Letter::Z];
                SiteOps {
                    left: letters.map(|l| P128::from_pauli(&one(l).tensor(&id))),
                    right: letters.map(|l| P128::from_pauli(&id.tensor(&one(l)))),
                    both: letters.map(|l| P128::from_pauli(&one(l).tensor(&one(l)))),
                }
            })
            .collect();
        let inference = FastInference::new(parent, parent)?;
        let m = scheme.n();
        let site_map = scheme.target().site_map();
        let sites = scheme.order().iter().map(|&s| site_map[s]).collect();
        let bases = (0..m).map(|t| idx(scheme.basis_at(t))).collect();
        let completion = match scheme {
            AnyScheme::Adaptive(a) => {
                Some((0..m * m).map(|i| if i % m > i / m { idx(a.completion_letter(i / m, i % m)) } else { 0 }).collect())
            }
            AnyScheme::Static(_) => None,
        };
        Ok(Simulator { scheme: scheme.clone(), qubits: 2 * n, template, ops, inference, policy, sites, bases, completion })
    }

    pub fn scheme(&self) -> &AnyScheme {
        &self.scheme
    }

    pub fn run_trial(&self, outcomes: Outcomes<'_>, truth: (i8, i8), rng: &mut ChaCha8Rng) -> Result<TrialResult> {
        let mut scratch = self.scratch();
        let summary = self.execute(&mut scratch, &outcomes, truth, rng, true)?;
        Ok(TrialResult {
            truth,
            knowledge: summary.knowledge,
            qubits: self.qubits,
            entries: scratch.entries,
            path: scratch.path,
            surrogate_flags: summary.surrogate_flags,
            forbidden_events: summary.forbidden_events,
        })
    }

    fn scratch(&self) -> Scratch {
        Scratch { state: self.template.clone(), inference: self.inference.clone(), entries: Vec::new(), path: Vec::new() }
    }

    fn execute(
        &self,
        scratch: &mut Scratch,
        outcomes: &Outcomes<'_>,
        truth: (i8, i8),
        rng: &mut ChaCha8Rng,
        keep_entries: bool,
    ) -> Result<Summary> {
        let n = self.scheme.n();
        if let Outcomes::Forced(bits) = outcomes {
            if bits.len() != n {
                return Err(Error::InvalidParams(format!("pattern of length {} for {n} positions", bits.len())));
            }
        }
        if truth.0.abs() != 1 || truth.1.abs() != 1 {
            return Err(Error::InvalidParams(format!("logical values must be ±1, got {truth:?}")));
        }
        scratch.state.load(&self.template);
        scratch.state.reset_logicals(truth.0, truth.1);
        scratch.inference.load(&self.inference);
        scratch.entries.clear();
        scratch.path.clear();
        let mut run = Run { sim: self, scratch, keep_entries, rng, surrogate_flags: 0, forbidden_events: 0 };

        for pre in self.scheme.target().pre_steps() {
            let ops = &self.ops[pre.site];
            run.measure(&ops.left[idx(pre.letter)], RecordKind::SingleQubit, None)?;
            run.measure(&ops.right[idx(pre.letter)], RecordKind::SingleQubit, None)?;
        }

        let mut first: Option<usize> = None;
        for t in 0..n {
            let ops = &self.ops[self.sites[t]];
            if let (Some(j), Some(comp)) = (first, &self.completion) {
                let c = comp[j * n + t];
                run.measure(&ops.left[c], RecordKind::SingleQubit, None)?;
                run.measure(&ops.right[c], RecordKind::SingleQubit, None)?;
                continue;
            }
            let guarded = (first.is_none() && t + 1 < n).then_some(t);
            if first.is_none() {
                run.check_surrogate(ops, t)?;
            }
            let success = match outcomes {
                Outcomes::Random(b) => b.draw(run.rng),
                Outcomes::Forced(bits) => bits[t],
            };
            run.scratch.path.push(success);
            if success {
                run.measure(&ops.both[0], RecordKind::BellSuccess, None)?;
                run.measure(&ops.both[2], RecordKind::BellSuccess, None)?;
                first.get_or_insert(t);
            } else {
                let b = self.bases[t];
                run.measure(&ops.both[b], RecordKind::TransversalProduct, guarded)?;
                run.measure(&ops.left[b], RecordKind::SingleQubit, guarded)?;
                run.measure(&ops.right[b], RecordKind::SingleQubit, guarded)?;
            }
        }

        Ok(Summary {
            knowledge: run.scratch.inference.knowledge(),
            surrogate_flags: run.surrogate_flags,
            forbidden_events: run.forbidden_events,
        })
    }
}

/// Per-worker buffers reused across trials.
struct Scratch {
    state: FastState,
    inference: FastInference,
    entries: Vec<(P128, i8, RecordKind)>,
    path: Vec<bool>,
}

struct Summary {
    knowledge: LogicalKnowledge,
    surrogate_flags: usize,
    forbidden_events: usize,
}

struct Run<'a, 'r> {
    sim: &'a Simulator,
    scratch: &'r mut Scratch,
    keep_entries: bool,
    rng: &'r mut ChaCha8Rng,
    surrogate_flags: usize,
    forbidden_events: usize,
}

impl Run<'_, '_> {
    fn show(&self, obs: &P128) -> String {
        obs.to_pauli(self.sim.qubits).display_split(self.sim.qubits / 2)
    }

    /// `guarded` carries the position when a forbidden outcome counts as a violation.
    fn measure(&mut self, obs: &P128, kind: RecordKind, guarded: Option<usize>) -> Result<()> {
        let (outcome, forbidden, informative) = self.scratch.state.measure(obs, self.rng);
        if forbidden {
            self.forbidden_events += 1;
            if let (Some(t), Enforcement::Enforce) = (guarded, self.sim.policy.forbidden) {
                return Err(Error::Forbidden(format!("{} at position {t}", self.show(obs))));
            }
        }
        // a determined outcome without logical content already lies in the
        // span of the code stabilizers and earlier records
        if informative {
            self.scratch.inference.push_record(*obs, outcome);
        }
        if self.keep_entries {
            self.scratch.entries.push((*obs, outcome, kind));
        }
        Ok(())
    }

    fn check_surrogate(&mut self, ops: &SiteOps, t: usize) -> Result<()> {
        for (obs, class) in ops.both.iter().zip(self.scratch.state.classify_pair(&ops.both)) {
            let ok = match class {
                FastClass::Anticommuting(_) => true,
                FastClass::Determined { reveals } => reveals.is_some(),
                FastClass::Forbidden(_) => false,
            };
            if !ok {
                match self.sim.policy.surrogate {
                    Enforcement::Enforce => {
                        return Err(Error::ModelAssumption(format!(
                            "{} at position {t} is neither random nor logical",
                            self.show(obs)
                        )))
                    }
                    Enforcement::Flag => self.surrogate_flags += 1,
                }
            }
        }
        Ok(())
    }
}

/// Rng of trial `i`: one ChaCha8 stream per trial under the same seed.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McResult {
    pub trials: u64,
    pub successes: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub logical_errors: u64,
    pub surrogate_flags: u64,
    pub forbidden_events: u64,
}

#[derive(Default)]
struct Tally {
    successes: u64,
    logical_errors: u64,
    surrogate_flags: u64,
    forbidden_events: u64,
}

impl Tally {
    fn add(mut self, o: Tally) -> Tally {
        self.successes += o.successes;
        self.logical_errors += o.logical_errors;
        self.surrogate_flags += o.surrogate_flags;
        self.forbidden_events += o.forbidden_events;
        self
    }
}

fn chunk(sim: &Simulator, b: Bernoulli, seed: u64, range: std::ops::Range<u64>) -> Result<Tally> {
    let mut t = Tally::default();
    let mut scratch = sim.scratch();
    for i in range {
        let mut rng = trial_rng(seed, i);
        let truth = (if rng.gen::<bool>() { 1 } else { -1 }, if rng.gen::<bool>() { 1 } else { -1 });
        let s = sim.execute(&mut scratch, &Outcomes::Random(b), truth, &mut rng, false)?;
        t.successes += (s.knowledge.known_count() >= 2) as u64;
        t.logical_errors += knowledge_contradicts(&s.knowledge, truth) as u64;
        t.surrogate_flags += s.surrogate_flags as u64;
        t.forbidden_events += s.forbidden_events as u64;
    }
    Ok(t)
}

pub fn monte_carlo(scheme: &AnyScheme, p_b: &BigRational, trials: u64, seed: u64, workers: usize) -> Result<McResult> {
    let sim = Simulator::new(scheme)?;
    monte_carlo_with(&sim, p_b, trials, seed, workers)
}

pub fn monte_carlo_with(sim: &Simulator, p_b: &BigRational, trials: u64, seed: u64, workers: usize) -> Result<McResult> {
    if trials == 0 {
        return Err(Error::InvalidParams("at least one trial is required".into()));
    }
    let b = Bernoulli::new(p_b)?;
    const CHUNK: u64 = 1024;
    let ranges: Vec<_> = (0..trials.div_ceil(CHUNK)).map(|c| c * CHUNK..((c + 1) * CHUNK).min(trials)).collect();
    let parts: Vec<Result<Tally>> = if workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
        pool.install(|| ranges.into_par_iter().map(|r| chunk(sim, b, seed, r)).collect())
    } else {
        ranges.into_iter().map(|r| chunk(sim, b, seed, r)).collect()
    };
    let mut total = Tally::default();
    for p in parts {
        total = total.add(p?);
    }
    let est = total.successes as f64 / trials as f64;
    Ok(McResult {
        trials,
        successes: total.successes,
        estimate: est,
        stderr: (est * (1.0 - est) / trials as f64).sqrt(),
        logical_errors: total.logical_errors,
        surrogate_flags: total.surrogate_flags,
        forbidden_events: total.forbidden_events,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes;
    use crate::engine::exact::evaluate_pattern;
    use crate::prob::rational;
    use crate::scheme::{build_optimal, build_static, Family, StaticKind};

    #[test]
    fn forced_patterns_agree_with_the_single_code_picture() {
        for s in [
            AnyScheme::from(build_optimal(&Family::Qpc(2, 2)).unwrap().0),
            AnyScheme::from(build_optimal(&Family::Tree(vec![2, 2])).unwrap().0),
            AnyScheme::from(build_static(StaticKind::Simple, &codes::tree(&[2, 2]).unwrap()).unwrap()),
        ] {
            let sim = Simulator::new(&s).unwrap();
            let n = s.n();
            for bits in 0u32..1 << n {
                let pat: Vec<bool> = (0..n).map(|t| bits >> t & 1 == 1).collect();
                let mut rng = trial_rng(7, bits as u64);
                let r = sim.run_trial(Outcomes::Forced(&pat), (-1, 1), &mut rng).unwrap();
                let e = evaluate_pattern(&s, &pat).unwrap();
                assert_eq!(r.success(), e.success, "{} {pat:?}", s.id());
                assert_eq!(r.path, e.path);
                assert!(!r.logical_error());
            }
        }
    }

    #[test]
    fn results_do_not_depend_on_workers() {
        let s = AnyScheme::from(build_optimal(&Family::FiveQubit).unwrap().0);
        let a = monte_carlo(&s, &rational(1, 2), 3000, 11, 1).unwrap();
        let b = monte_carlo(&s, &rational(1, 2), 3000, 11, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.logical_errors, 0);
    }

    #[test]
    fn bernoulli_rejects_bad_probabilities() {
        assert!(Bernoulli::new(&rational(3, 2)).is_err());
        let b = Bernoulli::new(&rational(0, 1)).unwrap();
        let mut rng = trial_rng(1, 1);
        assert!((0..100).all(|_| !b.draw(&mut rng)));
    }
}

//! Sufficient optimality conditions, the success bound and the two design rules.
//!
//! Everything here works in the single-code picture: `b_j` is a single-qubit
//! Pauli on the `j`-th scheduled site of the effective code.

use std::fmt;

use num_rational::BigRational;
use num_traits::One;
use rand::rngs::mock::StepRng;
use serde::Serialize;

use crate::codes::StabilizerCode;
use crate::error::{Error, Result};
use crate::gf2::SymplecticBasis;
use crate::pauli::{Letter, Pauli};
use crate::prob;
use crate::scheme::{CandidateGeneratorSequence, Scheme};
use crate::stabilizer::{Classification, ForbiddenPolicy, Origin, StabilizerState};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub j: usize,
    pub k: Option<usize>,
    pub operators: Vec<String>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionStatus {
    pub condition: u8,
    pub passed: bool,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub scheme: String,
    /// Set when `C` does not generate the stabilizer; the conditions are then meaningless.
    pub candidate_issue: Option<String>,
    pub conditions: Vec<ConditionStatus>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.candidate_issue.is_none() && self.conditions.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&ConditionStatus> {
        self.conditions.iter().find(|c| !c.passed)
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scheme {}", self.scheme)?;
        if let Some(i) = &self.candidate_issue {
            writeln!(f, "candidate sequence: INVALID ({i})")?;
        }
        for c in &self.conditions {
            match &c.witness {
                None => writeln!(f, "condition {}: pass", c.condition)?,
                Some(w) => {
                    let k = w.k.map(|k| format!(", k = {k}")).unwrap_or_default();
                    writeln!(f, "condition {}: FAIL at j = {}{k}: {} [{}]", c.condition, w.j, w.detail, w.operators.join(", "))?
                }
            }
        }
        Ok(())
    }
}

fn status(condition: u8, witness: Option<Witness>) -> ConditionStatus {
    ConditionStatus { condition, passed: witness.is_none(), witness }
}

fn witness(j: usize, k: Option<usize>, ops: &[&Pauli], detail: impl Into<String>) -> Option<Witness> {
    Some(Witness { j, k, operators: ops.iter().map(|p| p.to_string()).collect(), detail: detail.into() })
}

/// Checks the five conditions for `scheme` against the candidate sequence `c`.
/// Positions are 0-based; the basis at the last position is ignored.
pub fn check_conditions(scheme: &Scheme, c: &CandidateGeneratorSequence) -> Result<ConditionReport> {
    let code = scheme.code();
    let n = scheme.n();
    if c.len() + 1 != n {
        return Err(Error::InvalidScheme(format!("{} candidates for {n} positions", c.len())));
    }
    let cs = c.ops();
    let b: Vec<Pauli> = (0..n).map(|j| scheme.basis_op(j)).collect();
    let last = n - 1;

    let c1 = (0..last).find(|&j| b[j].commutes_unchecked(&cs[j])).and_then(|j| witness(j, Some(j), &[&b[j], &cs[j]], "b_j commutes with c_j"));

    let c2 = (0..last)
        .flat_map(|j| (j + 1..last).map(move |k| (j, k)))
        .find(|&(j, k)| !b[j].commutes_unchecked(&cs[k]))
        .and_then(|(j, k)| witness(j, Some(k), &[&b[j], &cs[k]], "b_j anticommutes with a later c_k"));

    let reps = [code.logical_x().clone(), code.logical_y(), code.logical_z().clone()];
    let mut c3 = None;
    let mut span = code.stabilizer_basis();
    'outer: for j in 0..last {
        for alt in Letter::PAULIS.into_iter().filter(|&l| l != scheme.bases()[j]) {
            let bt = Pauli::single(n, scheme.order()[j], alt);
            if (j..last).any(|k| !bt.commutes_unchecked(&cs[k])) {
                continue;
            }
            if reps.iter().any(|l| span.contains(&bt.stripped_product(l).expect("same n"))) {
                continue;
            }
            c3 = witness(j, None, &[&bt], "alternative basis neither disturbs a later generator nor completes a logical");
            break 'outer;
        }
        span.extend(&b[j])?;
    }

    let mut c4 = None;
    'c4: for j in 0..n {
        let (x, z) = &scheme.logicals()[j];
        for (k, bk) in b.iter().enumerate().take(j) {
            for l in [x, z] {
                if !l.commutes_unchecked(bk) {
                    c4 = witness(j, Some(k), &[l, bk], "logical representative anticommutes with an earlier basis");
                    break 'c4;
                }
            }
        }
    }

    let c5 = (0..n).find_map(|j| {
        let (x, z) = &scheme.logicals()[j];
        let pos = x.anticommute_positions(z).expect("same n");
        (pos != [scheme.order()[j]]).then(|| witness(j, None, &[x, z], format!("pair anticommutes on sites {pos:?}"))).flatten()
    });

    Ok(ConditionReport {
        scheme: scheme.id().to_string(),
        candidate_issue: c.violation(code),
        conditions: vec![status(1, c1), status(2, c2), status(3, c3), status(4, c4), status(5, c5)],
    })
}

/// `1 - (1 - P_B)^{min(n1, n2)}`.
pub fn bound(n1: usize, n2: usize, p_b: &BigRational) -> Result<BigRational> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::InvalidParams("code sizes must be positive".into()));
    }
    prob::check_probability(p_b)?;
    let one = BigRational::one();
    Ok(&one - prob::pow(&(&one - p_b), n1.min(n2)))
}

/// First position at which an all-failure prefix measures something that is
/// not random, i.e. touches logical information without a successful BM.
pub fn premature_logical_position(scheme: &Scheme) -> Result<Option<usize>> {
    let code = scheme.code();
    let mut gens: Vec<(Pauli, Origin)> = code.generators().iter().map(|g| (g.clone(), Origin::CodeStabilizer)).collect();
    gens.push((code.logical_x().clone(), Origin::LogicalX));
    let mut state = StabilizerState::from_generators(gens)?;
    let mut rng = StepRng::new(0, 0);
    for j in 0..scheme.n().saturating_sub(1) {
        let b = scheme.basis_op(j);
        match state.classify(&b)? {
            Classification::Anticommuting { .. } => {
                state.measure(&b, Some(1), &mut rng, ForbiddenPolicy::Refuse)?;
            }
            _ => return Ok(Some(j)),
        }
    }
    Ok(None)
}

pub fn heuristic_no_premature_logical(scheme: &Scheme) -> Result<bool> {
    Ok(premature_logical_position(scheme)?.is_none())
}

/// A stabilizer `g` that the first `len` bases measure except on one still
/// unmeasured site, as `(len, g, m)` with `m` the missing single-qubit factor.
pub fn almost_measured_stabilizer(scheme: &Scheme) -> Result<Option<(usize, Pauli, Pauli)>> {
    let code: &StabilizerCode = scheme.code();
    let n = scheme.n();
    let gens = code.stabilizer_basis();
    let mut with_gens = gens.clone();
    let mut only_b = SymplecticBasis::new(n);
    for len in 1..n {
        let b = scheme.basis_op(len - 1);
        with_gens.extend(&b)?;
        only_b.extend(&b)?;
        for &s in &scheme.order()[len..] {
            for l in Letter::PAULIS {
                let m = Pauli::single(n, s, l);
                let Some(coeffs) = with_gens.in_span(&m)? else { continue };
                let g_part: Vec<usize> = coeffs.iter().copied().filter(|&i| i < gens.inputs().len()).collect();
                let g = with_gens.signed_product(&g_part).stripped();
                return Ok(Some((len, g, m)));
            }
        }
    }
    Ok(None)
}

pub fn heuristic_no_almost_stabilizer(scheme: &Scheme) -> Result<bool> {
    Ok(almost_measured_stabilizer(scheme)?.is_none())
}

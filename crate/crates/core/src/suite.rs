//! Built-in schemes: the optimal adaptive family and the static baselines.

use crate::codes;
use crate::error::Result;
use crate::scheme::{build_optimal, build_static, AnyScheme, CandidateGeneratorSequence, Family, Scheme, StaticKind};

pub fn optimal_families() -> Vec<Family> {
    let mut out = Vec::new();
    for r in 1..=4 {
        for m in 1..=4 {
            out.push(Family::Qpc(r, m));
        }
    }
    out.push(Family::FiveQubit);
    out.push(Family::Steane);
    for (r, m) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        out.push(Family::Standard(r, m));
    }
    for d in 2..=5 {
        out.push(Family::Rotated(d, d));
    }
    out.push(Family::Rotated(3, 4));
    for b in [vec![2, 2], vec![2, 2, 2], vec![3, 2]] {
        out.push(Family::Tree(b));
    }
    out
}

pub fn optimal_schemes() -> Result<Vec<(Scheme, CandidateGeneratorSequence)>> {
    optimal_families().iter().map(build_optimal).collect()
}

/// Static baselines, smallest first.
pub fn static_schemes() -> Result<Vec<AnyScheme>> {
    let mut out: Vec<AnyScheme> = Vec::new();
    for d in 2..=5 {
        let code = codes::rotated_surface(d, d)?;
        out.push(build_static(StaticKind::Simple, &code)?.into());
        out.push(build_static(StaticKind::Optimized, &code)?.into());
    }
    for b in [vec![2, 2], vec![3, 2], vec![2, 2, 2]] {
        out.push(build_static(StaticKind::Simple, &codes::tree(&b)?)?.into());
    }
    for (r, m) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        out.push(build_static(StaticKind::String, &codes::standard_surface(r, m)?)?.into());
    }
    Ok(out)
}

pub fn all_schemes() -> Result<Vec<AnyScheme>> {
    let mut out: Vec<AnyScheme> = optimal_schemes()?.into_iter().map(|(s, _)| s.into()).collect();
    out.extend(static_schemes()?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique() {
        let all = all_schemes().unwrap();
        let mut ids: Vec<&str> = all.iter().map(|s| s.id()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), all.len());
    }
}

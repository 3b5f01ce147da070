use logical_bm::physical::*;
use num_rational::Rational64;
use num_traits::{One, Zero};

fn fock(terms: &[(Pattern, Amp)]) -> FockVector {
    FockVector::from_terms(terms.iter().copied())
}

fn half_i() -> Amp {
    Amp::i().scale(Rational64::new(1, 2))
}

fn i_over_sqrt2() -> Amp {
    Amp::i() * Amp::inv_sqrt2()
}

#[test]
fn phi_outputs_match_exactly() {
    let q = half_i();
    let plus = fock(&[([2, 0, 0, 0], q), ([0, 0, 2, 0], q), ([0, 2, 0, 0], q), ([0, 0, 0, 2], q)]);
    let minus = fock(&[([2, 0, 0, 0], q), ([0, 0, 2, 0], q), ([0, 2, 0, 0], -q), ([0, 0, 0, 2], -q)]);
    assert_eq!(analyzer(&Bell::PhiPlus.dual_rail()).unwrap(), plus);
    assert_eq!(analyzer(&Bell::PhiMinus.dual_rail()).unwrap(), minus);
}

#[test]
fn psi_plus_output_matches_exactly() {
    let a = i_over_sqrt2();
    let expected = fock(&[([1, 1, 0, 0], a), ([0, 0, 1, 1], a)]);
    assert_eq!(analyzer(&Bell::PsiPlus.dual_rail()).unwrap(), expected);
}

#[test]
fn psi_minus_output_matches_up_to_global_phase() {
    let a = i_over_sqrt2();
    let reference = fock(&[([1, 0, 0, 1], a), ([0, 1, 1, 0], -a)]);
    let got = analyzer(&Bell::PsiMinus.dual_rail()).unwrap();
    let lambda = got.proportional_to(&reference).expect("same ray");
    assert_eq!(lambda.norm_sqr().unwrap(), Rational64::one());
    assert_eq!(got.amplitude(&[1, 0, 0, 1]).norm_sqr().unwrap(), Rational64::new(1, 2));
}

#[test]
fn every_input_has_unit_total_probability() {
    for b in Bell::ALL {
        let out = analyzer(&b.dual_rail()).unwrap();
        assert_eq!(out.norm_sqr().unwrap(), Rational64::one(), "{}", b.name());
        let over_patterns: Rational64 =
            two_photon_patterns().iter().map(|p| out.amplitude(p).norm_sqr().unwrap()).fold(Rational64::zero(), |a, b| a + b);
        assert_eq!(over_patterns, Rational64::one());
    }
}

#[test]
fn pattern_classes() {
    assert_eq!(classify_pattern(&[1, 1, 0, 0]).unwrap(), OutcomeClass::Unambiguous(Bell::PsiPlus));
    assert_eq!(classify_pattern(&[0, 0, 1, 1]).unwrap(), OutcomeClass::Unambiguous(Bell::PsiPlus));
    assert_eq!(classify_pattern(&[1, 0, 0, 1]).unwrap(), OutcomeClass::Unambiguous(Bell::PsiMinus));
    assert_eq!(classify_pattern(&[0, 1, 1, 0]).unwrap(), OutcomeClass::Unambiguous(Bell::PsiMinus));
    assert_eq!(classify_pattern(&[2, 0, 0, 0]).unwrap(), OutcomeClass::Partial { zz: 1, z1: 1, z2: 1 });
    assert_eq!(classify_pattern(&[0, 0, 2, 0]).unwrap(), OutcomeClass::Partial { zz: 1, z1: 1, z2: 1 });
    assert_eq!(classify_pattern(&[0, 2, 0, 0]).unwrap(), OutcomeClass::Partial { zz: 1, z1: -1, z2: -1 });
    assert_eq!(classify_pattern(&[0, 0, 0, 2]).unwrap(), OutcomeClass::Partial { zz: 1, z1: -1, z2: -1 });
    assert_eq!(classify_pattern(&[1, 0, 1, 0]).unwrap(), OutcomeClass::Impossible);
    assert!(classify_pattern(&[1, 1, 1, 0]).is_err());
}

#[test]
fn half_success_on_the_uniform_mixture() {
    assert_eq!(success_probability().unwrap(), Rational64::new(1, 2));
}

#[test]
fn unambiguous_patterns_are_perfectly_specific() {
    let outputs = output_table().unwrap();
    assert_eq!(two_photon_patterns().len(), 10);
    for p in two_photon_patterns() {
        if let OutcomeClass::Unambiguous(b) = classify_pattern(&p).unwrap() {
            for (input, out) in &outputs {
                assert_eq!(out.amplitude(&p).is_zero(), *input != b, "{p:?} from {}", input.name());
            }
        }
    }
}

#[test]
fn partial_payload_fixes_zz_for_every_input_that_reaches_it() {
    let zz = |b: Bell| if matches!(b, Bell::PhiPlus | Bell::PhiMinus) { 1 } else { -1 };
    for p in two_photon_patterns() {
        if let OutcomeClass::Partial { zz: v, z1, z2 } = classify_pattern(&p).unwrap() {
            assert_eq!(v, z1 * z2);
            for (input, out) in output_table().unwrap() {
                if !out.amplitude(&p).is_zero() {
                    assert_eq!(zz(input), v);
                }
            }
        }
    }
}

#[test]
fn basis_variants() {
    assert_eq!(Variant::identity().payload(), (1, 'Z', 'Z'));
    let h = hadamard_variant().unwrap();
    assert_eq!(h.payload(), (1, 'X', 'X'));
    let payloads: Vec<(char, char)> = all_variants().unwrap().iter().map(|v| (v.payload().1, v.payload().2)).collect();
    for l in ['X', 'Y', 'Z'] {
        assert!(payloads.contains(&(l, l)), "{l}{l} variant");
    }
    let bad = [Bell::PhiPlus, Bell::PhiPlus, Bell::PsiPlus, Bell::PsiMinus];
    assert!(Variant::for_permutation(bad).is_err());
}

#[test]
fn variant_composition_matches_permutation_composition() {
    let all = all_variants().unwrap();
    assert_eq!(all.len(), 24);
    for v in &all {
        for w in &all {
            let c = v.compose(w).unwrap();
            let expected = Bell::ALL.map(|b| v.permutation[w.permutation[b.index()].index()]);
            assert_eq!(c.permutation, expected);
        }
    }
}

#[test]
fn variants_stay_perfectly_specific_in_the_input_frame() {
    for v in all_variants().unwrap() {
        for p in two_photon_patterns() {
            if let OutcomeClass::Unambiguous(b) = v.classify(&p).unwrap() {
                for input in Bell::ALL {
                    let rotated = v.permutation[input.index()];
                    let reached = !analyzer(&rotated.dual_rail()).unwrap().amplitude(&p).is_zero();
                    assert_eq!(reached, input == b);
                }
            }
        }
    }
}

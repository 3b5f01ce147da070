use logical_bm::codes;
use logical_bm::engine::{exact_success_probability, ExactOptions};
use logical_bm::gf2::{rank_of, SymplecticBasis};
use logical_bm::scheme::AnyScheme;
use logical_bm::stabilizer::{infer_logicals, ForbiddenPolicy, MeasurementRecord, RecordKind};
use logical_bm::suite::{optimal_schemes, static_schemes};
use logical_bm::verify::{bound, check_conditions, heuristic_no_almost_stabilizer, heuristic_no_premature_logical};
use logical_bm::{CosetClass, Letter, Pauli, StabilizerCode, StabilizerState};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const LETTERS: [Letter; 4] = [Letter::I, Letter::X, Letter::Y, Letter::Z];

fn pauli(n: usize) -> impl Strategy<Value = Pauli> {
    (prop::collection::vec(0usize..4, n), 0u8..4).prop_map(|(ls, ph)| {
        let letters: Vec<Letter> = ls.into_iter().map(|i| LETTERS[i]).collect();
        let p = Pauli::from_letters(&letters);
        Pauli::from_words(p.n(), p.x_words(), p.z_words(), ph)
    })
}

/// Single-site product `a·b = i^k c`, written out by hand.
fn site_product(a: Letter, b: Letter) -> (u8, Letter) {
    use Letter::*;
    match (a, b) {
        (I, l) | (l, I) => (0, l),
        (X, X) | (Y, Y) | (Z, Z) => (0, I),
        (X, Y) => (1, Z),
        (Y, Z) => (1, X),
        (Z, X) => (1, Y),
        (Y, X) => (3, Z),
        (Z, Y) => (3, X),
        (X, Z) => (3, Y),
    }
}

fn table_product(a: &Pauli, b: &Pauli) -> Pauli {
    let mut phase = a.phase() + b.phase();
    let mut letters = Vec::with_capacity(a.n());
    for j in 0..a.n() {
        let (k, l) = site_product(a.letter(j), b.letter(j));
        phase += k;
        letters.push(l);
    }
    let p = Pauli::from_letters(&letters);
    Pauli::from_words(p.n(), p.x_words(), p.z_words(), phase % 4)
}

fn small_codes() -> Vec<StabilizerCode> {
    vec![codes::qpc(2, 2).unwrap(), codes::five_qubit(), codes::steane(), codes::rotated_surface(3, 3).unwrap()]
}

fn rational() -> impl Strategy<Value = BigRational> {
    (0i64..=64).prop_map(|k| BigRational::new(BigInt::from(k), BigInt::from(64)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn multiplication_matches_the_site_table(a in pauli(70), b in pauli(70), c in pauli(70)) {
        let ab = a.multiply(&b).unwrap();
        prop_assert_eq!(&ab, &table_product(&a, &b));
        let left = ab.multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn commutation_is_the_parity_of_anticommuting_sites(a in pauli(130), b in pauli(130)) {
        let sites = a.anticommute_positions(&b).unwrap();
        prop_assert_eq!(a.commutes(&b).unwrap(), sites.len() % 2 == 0);
        for j in sites {
            prop_assert!(!a.letter(j).commutes_with(b.letter(j)));
        }
    }

    #[test]
    fn span_coefficients_rebuild_the_operator(
        which in 0usize..4,
        rows in prop::collection::vec(prop::collection::vec(any::<bool>(), 8), 1..10),
        pick in prop::collection::vec(any::<bool>(), 10),
    ) {
        // Commuting inputs: random products of one code's stabilizer generators.
        let code = &small_codes()[which];
        let n = code.n();
        let ops: Vec<Pauli> = rows
            .iter()
            .map(|row| {
                let mut acc = Pauli::identity(n);
                for (g, &take) in code.generators().iter().zip(row) {
                    if take {
                        acc = acc.multiply(g).unwrap();
                    }
                }
                acc
            })
            .collect();
        let basis = SymplecticBasis::from_ops(n, &ops).unwrap();
        let mut target = Pauli::identity(n);
        for (op, &take) in ops.iter().zip(&pick) {
            if take {
                target = target.multiply(op).unwrap();
            }
        }
        let coeffs = basis.in_span(&target).unwrap().expect("subset product lies in the span");
        let rebuilt = basis.signed_product(&coeffs);
        prop_assert_eq!(rebuilt.stripped(), target.stripped());
        let ratio = rebuilt.multiply(&target).unwrap();
        prop_assert!(ratio.is_identity() && ratio.sign().is_some());
    }

    #[test]
    fn exact_probability_is_monotone_in_pb(i in 0usize..24, p in rational(), q in rational()) {
        let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
        let suite = monotone_suite();
        let s = &suite[i % suite.len()];
        let e = exact_success_probability(s, &lo, ExactOptions::default()).unwrap();
        prop_assert!(e.probability_at(&lo) <= e.probability_at(&hi));
        prop_assert_eq!(e.probability_at(&lo), e.probability);
    }

    #[test]
    fn optimal_schemes_sit_on_the_bound(i in 0usize..30, p in rational()) {
        let all = optimal_schemes().unwrap();
        let (s, _) = &all[i % all.len()];
        prop_assume!(s.n() <= 25);
        let any: AnyScheme = s.clone().into();
        let e = exact_success_probability(&any, &p, ExactOptions::default()).unwrap();
        prop_assert_eq!(e.probability, bound(s.n(), s.n(), &p).unwrap());
    }
}

fn monotone_suite() -> Vec<AnyScheme> {
    let mut out: Vec<AnyScheme> = optimal_schemes().unwrap().into_iter().map(|(s, _)| s.into()).filter(|s: &AnyScheme| s.n() <= 16).collect();
    out.extend(static_schemes().unwrap().into_iter().filter(|s| s.n() <= 16));
    out
}

#[derive(Clone, Debug)]
enum Step {
    Single(usize, Letter),
    Transversal(usize, Letter),
}

fn step(n: usize) -> impl Strategy<Value = Step> {
    (any::<bool>(), 0..n, 0usize..3).prop_map(|(single, j, l)| {
        let l = Letter::PAULIS[l];
        if single {
            Step::Single(j, l)
        } else {
            Step::Transversal(j, l)
        }
    })
}

fn observable(code_n: usize, s: &Step, second_side: bool) -> Pauli {
    match *s {
        Step::Single(j, l) => {
            let site = if second_side { code_n + j } else { j };
            Pauli::single(2 * code_n, site, l)
        }
        Step::Transversal(j, l) => Pauli::single(code_n, j, l).tensor(&Pauli::single(code_n, j, l)),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn measurement_sequences_keep_the_state_consistent(
        which in 0usize..3,
        truth in (any::<bool>(), any::<bool>()),
        steps in prop::collection::vec((step(7), any::<bool>()), 1..14),
        seed in any::<u64>(),
    ) {
        let code = &small_codes()[which];
        let n = code.n();
        let (lx, lz) = (if truth.0 { 1 } else { -1 }, if truth.1 { 1 } else { -1 });
        let mut state = StabilizerState::init_encoded_bell(code, code, lx, lz).unwrap();
        let mut record = MeasurementRecord::new();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut forbidden_seen = false;
        for (s, side) in steps {
            let s = match s {
                Step::Single(j, l) => Step::Single(j % n, l),
                Step::Transversal(j, l) => Step::Transversal(j % n, l),
            };
            let obs = observable(n, &s, side);
            if record.entries().iter().any(|e| !e.observable.commutes(&obs).unwrap()) {
                continue;
            }
            let out = state.measure(&obs, None, &mut rng, ForbiddenPolicy::Override).unwrap();
            forbidden_seen |= out.forbidden;
            let kind = if matches!(s, Step::Single(..)) { RecordKind::SingleQubit } else { RecordKind::TransversalProduct };
            record.push(obs, out.outcome, kind).unwrap();

            let gens: Vec<Pauli> = state.generators().map(|(g, _)| g.clone()).collect();
            for a in &gens {
                for b in &gens {
                    prop_assert!(a.commutes(b).unwrap());
                }
            }
            prop_assert_eq!(rank_of(&gens), 2 * n);
            for (g, origin) in state.generators() {
                if origin.is_logical() {
                    let class = code.coset_class(&g.block(0, n));
                    prop_assert!(matches!(class, CosetClass::LogicalX | CosetClass::LogicalY | CosetClass::LogicalZ));
                }
            }

            let k = infer_logicals(&record, code, code).unwrap();
            if let Some(x) = k.x { prop_assert_eq!(x, lx); }
            if let Some(z) = k.z { prop_assert_eq!(z, lz); }
            if let Some(y) = k.y { prop_assert_eq!(y, -lx * lz); }
            if forbidden_seen {
                prop_assert!(state.logical_generator_count() <= 1);
                prop_assert!(k.claim().is_none());
            }
        }
    }
}

#[test]
fn doubled_logicals_anticommute_oddly_in_each_block() {
    let mut all = small_codes();
    all.extend([codes::qpc(3, 4).unwrap(), codes::standard_surface(3, 2).unwrap(), codes::tree(&[2, 2]).unwrap()]);
    for code in all {
        let n = code.n();
        let xx = code.logical_x().tensor(code.logical_x());
        let zz = code.logical_z().tensor(code.logical_z());
        let (a, b) = xx.anticommute_count_by_block(&zz, n).unwrap();
        assert!(a % 2 == 1 && b % 2 == 1, "{}: {a} {b}", code.family());
    }
}

#[test]
fn constructors_pass_their_checks_and_count_qubits() {
    for r in 1..=6 {
        for m in 1..=6 {
            let q = codes::qpc(r, m).unwrap();
            assert!(q.check().is_valid());
            assert_eq!(q.n(), r * m);
            if r >= 2 && m >= 2 {
                let s = codes::standard_surface(r, m).unwrap();
                assert!(s.check().is_valid());
                assert_eq!(s.n(), 2 * m * r - m - r + 1);
                let t = codes::rotated_surface(r, m).unwrap();
                assert!(t.check().is_valid());
                assert_eq!(t.n(), r * m);
            }
        }
    }
    for b in [vec![2], vec![2, 2], vec![3, 2], vec![2, 2, 2], vec![4, 1, 2]] {
        let t = codes::tree(&b).unwrap();
        assert!(t.check().is_valid());
        let mut level = 1;
        let mut total = 1;
        for x in &b {
            level *= x;
            total += level;
        }
        assert_eq!(t.n(), total);
    }
}

#[test]
fn passing_schemes_reach_the_bound_and_pass_both_heuristics() {
    let ps = [(1, 4), (1, 2), (3, 4)].map(|(a, b)| BigRational::new(BigInt::from(a), BigInt::from(b)));
    for (s, c) in optimal_schemes().unwrap() {
        let report = check_conditions(&s, &c).unwrap();
        if !report.passed() {
            continue;
        }
        assert!(heuristic_no_premature_logical(&s).unwrap(), "{}", s.id());
        assert!(heuristic_no_almost_stabilizer(&s).unwrap(), "{}", s.id());
        if s.n() > 25 {
            continue;
        }
        let any: AnyScheme = s.clone().into();
        for p in &ps {
            let e = exact_success_probability(&any, p, ExactOptions::default()).unwrap();
            assert_eq!(e.probability, bound(s.n(), s.n(), p).unwrap(), "{} at {p}", s.id());
        }
    }
}

#[test]
fn random_outcomes_are_balanced() {
    let code = codes::five_qubit();
    let start = StabilizerState::init_encoded_bell(&code, &code, 1, -1).unwrap();
    let obs = Pauli::single(10, 2, Letter::X);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let trials = 20_000;
    let mut plus = 0u32;
    for _ in 0..trials {
        let (o, _) = start.measured(&obs, None, &mut rng, ForbiddenPolicy::Refuse).unwrap();
        plus += (o == 1) as u32;
    }
    let sigma = (trials as f64 * 0.25).sqrt();
    assert!((plus as f64 - trials as f64 / 2.0).abs() <= 4.0 * sigma, "{plus} of {trials}");
}

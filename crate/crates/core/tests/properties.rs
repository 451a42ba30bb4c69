use kappa_lab::bounds::{self, BoundReport, Direction};
use kappa_lab::limits;
use kappa_lab::stats::{kappa_series, q_series, s_below_series};
use kappa_lab::{partitions, Engine, ExactQ, Parity, Permutation};
use proptest::prelude::*;
use rug::Integer;

fn small_engine() -> &'static Engine {
    use std::sync::OnceLock;
    static E: OnceLock<Engine> = OnceLock::new();
    E.get_or_init(|| Engine::new(60))
}

#[test]
fn parity_classes_add_up_to_four_kappa() {
    let engine = Engine::shared();
    let four = ExactQ::from_int(4);
    for n in 2..=engine.order() {
        let lhs = engine.kappa_even(n).unwrap() + engine.kappa_odd(n).unwrap();
        assert_eq!(lhs, &four * &engine.kappa_sym(n).unwrap(), "n = {n}");
    }
}

#[test]
fn probabilities_are_ordered_and_bounded() {
    let engine = Engine::shared();
    let one = ExactQ::one();
    for n in 0..=engine.order() {
        let q = engine.q_split(n).unwrap();
        let e = engine.kappa_even(n).unwrap();
        let a = engine.kappa_alt(n).unwrap();
        assert!(q <= e, "n = {n}");
        for v in [&q, &e, &a, &engine.kappa_sym(n).unwrap(), &engine.kappa_odd(n).unwrap()] {
            assert!(!v.is_negative() && v <= &one, "n = {n}");
        }
    }
}

#[test]
fn generating_function_coefficients_are_nonnegative() {
    let order = 120;
    for series in [kappa_series(order, false), q_series(order), s_below_series(15, order)] {
        assert!(series.coefficients().iter().all(|c| !c.is_negative()));
    }
    // the signed series alternates in sign but never outgrows the plain one
    let plain = kappa_series(order, false);
    let signed = kappa_series(order, true);
    for (p, s) in plain.coefficients().iter().zip(signed.coefficients()) {
        assert!(&s.abs() <= p);
    }
}

#[test]
fn cycle_type_probabilities_sum_to_one() {
    for n in 0..=40 {
        let total: ExactQ =
            partitions(n).map(|p| ExactQ::new(1, p.centralizer_order()).unwrap()).sum();
        assert_eq!(total, ExactQ::one(), "n = {n}");
    }
}

#[test]
fn half_of_the_group_is_even() {
    for n in 2..=30u32 {
        let fact = Integer::from(Integer::factorial(n));
        let even: Integer = partitions(n).filter(|p| p.sign() == Parity::Even).map(|p| p.class_size()).sum();
        assert_eq!(even, Integer::from(&fact / 2u32), "n = {n}");
        for p in partitions(n) {
            let expected = Parity::of((n as usize - p.len()) as u64);
            assert_eq!(p.sign(), expected);
        }
    }
}

#[test]
fn alternating_identity_holds_on_the_enumeration_range() {
    let engine = Engine::shared();
    for n in 2..=60 {
        assert_eq!(engine.kappa_alt(n).unwrap(), engine.kappa_alt_direct(n).unwrap(), "n = {n}");
    }
}

#[test]
fn limit_constants_grow_with_more_terms() {
    let engine = small_engine();
    let mut prev = limits::partial_constants(engine, 0).unwrap();
    for d in 1..=60 {
        let p = limits::partial_constants(engine, d).unwrap();
        assert!(p.a1 >= prev.a1 && p.a2 >= prev.a2 && p.b1 >= prev.b1 && p.b2 >= prev.b2);
        prev = p;
    }
}

#[test]
fn series_constants_relate_to_kappa_partial_sums() {
    // A₁ + A₂ counts every d once with weight κ_E + κ_O = 4κ for d ≥ 2
    let engine = small_engine();
    let p = limits::partial_constants(engine, 40).unwrap();
    let four_kappa: ExactQ = (2..=40).map(|d| engine.kappa_sym(d).unwrap() * ExactQ::from_int(4)).sum();
    let low: ExactQ = (0..=1)
        .map(|d| engine.even_weight(d).unwrap() + engine.odd_weight(d).unwrap())
        .sum();
    assert_eq!(p.a1 + p.a2, four_kappa + low);
}

fn arb_permutation(max_n: u32) -> impl Strategy<Value = Permutation> {
    (1..=max_n)
        .prop_flat_map(|n| Just((0..n).collect::<Vec<u32>>()).prop_shuffle())
        .prop_map(|images| Permutation::from_images(images).unwrap())
}

fn arb_rational() -> impl Strategy<Value = ExactQ> {
    (any::<i64>(), 1..i64::MAX).prop_map(|(p, q)| ExactQ::ratio(p, q))
}

proptest! {
    #[test]
    fn rationals_round_trip_through_json(v in arb_rational()) {
        let text = serde_json::to_string(&v).unwrap();
        let inner: String = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(inner.parse::<ExactQ>().unwrap(), v);
    }

    #[test]
    fn cycle_sign_matches_inversions(p in arb_permutation(12)) {
        prop_assert_eq!(p.parity(), p.parity_by_inversions());
        prop_assert_eq!(p.cycle_type().size(), p.degree());
        prop_assert_eq!(p.cycle_type().sign(), p.parity());
    }

    #[test]
    fn conjugation_preserves_cycle_type(p in arb_permutation(10), seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let by = kappa_lab::montecarlo::sample_permutation(p.degree(), &mut rng);
        prop_assert_eq!(p.conjugate_by(&by).cycle_type(), p.cycle_type());
    }

    #[test]
    fn report_merge_is_commutative_and_associative(
        cells in prop::collection::vec((2u32..=20, 2u32..=20), 1..12),
        split in 0usize..12,
    ) {
        let engine = small_engine();
        let reports: Vec<BoundReport> = cells
            .iter()
            .filter(|(n, k)| k <= n)
            .map(|&(n, k)| bounds::verify_prop_q(engine, n, k, Direction::Upper).unwrap())
            .collect();
        prop_assume!(!reports.is_empty());
        let split = split.min(reports.len());
        let fold = |rs: &[BoundReport]| {
            rs.iter().cloned().fold(BoundReport::new("prop_q_upper"), BoundReport::merge)
        };
        let left = fold(&reports[..split]).merge(fold(&reports[split..]));
        let right = fold(&reports[split..]).merge(fold(&reports[..split]));
        let flat = fold(&reports);
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(&left, &flat);
        prop_assert_eq!(left.holds, left.counterexamples.is_empty());
    }

    #[test]
    fn enclosures_nest_under_refinement(d1 in 2u32..=60, d2 in 2u32..=60) {
        let engine = small_engine();
        let (lo, hi) = (d1.min(d2), d1.max(d2));
        let coarse = limits::enclose_constants(engine, lo).unwrap();
        let fine = limits::enclose_constants(engine, hi).unwrap();
        prop_assert!(fine.a1.nested_in(&coarse.a1));
        prop_assert!(fine.a2.nested_in(&coarse.a2));
        prop_assert!(fine.b1.nested_in(&coarse.b1));
        prop_assert!(fine.b2.nested_in(&coarse.b2));
        let t_coarse = limits::limit_enclosures(engine, lo).unwrap();
        let t_fine = limits::limit_enclosures(engine, hi).unwrap();
        prop_assert!(t_fine.even.nested_in(&t_coarse.even));
        prop_assert!(t_fine.odd.nested_in(&t_coarse.odd));
    }
}

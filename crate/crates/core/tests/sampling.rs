use std::collections::{HashMap, HashSet};

use kappa_lab::montecarlo::{
    self, canonical_conjugator, conjugate_in_alternating, cycle_type, estimate, sample_permutation, worker_rng,
};
use kappa_lab::{Engine, ExactQ, Permutation, Quantity};

fn all_even(n: u32) -> Vec<Permutation> {
    let mut images: Vec<u32> = (0..n).collect();
    let mut out = Vec::new();
    permute(&mut images, 0, &mut out);
    out.retain(|p| p.is_even());
    out.sort();
    out
}

fn permute(v: &mut Vec<u32>, i: usize, out: &mut Vec<Permutation>) {
    if i == v.len() {
        out.push(Permutation::from_images(v.clone()).unwrap());
        return;
    }
    for j in i..v.len() {
        v.swap(i, j);
        permute(v, i + 1, out);
        v.swap(i, j);
    }
}

#[test]
fn shuffle_is_uniform_on_three_points() {
    let samples = 600_000u64;
    let mut rng = worker_rng(2024, 0);
    let mut counts: HashMap<Vec<u32>, u64> = HashMap::new();
    for _ in 0..samples {
        *counts.entry(sample_permutation(3, &mut rng).images().to_vec()).or_default() += 1;
    }
    assert_eq!(counts.len(), 6);
    let p = 1.0 / 6.0;
    let sigma = (samples as f64 * p * (1.0 - p)).sqrt();
    let mut chi2 = 0.0;
    for &c in counts.values() {
        let dev = c as f64 - samples as f64 * p;
        assert!(dev.abs() <= 5.0 * sigma, "count {c}");
        chi2 += dev * dev / (samples as f64 * p);
    }
    // 5 degrees of freedom; the 99.9% point is about 20.5
    assert!(chi2 < 20.5, "chi2 = {chi2}");
}

#[test]
fn full_cycles_appear_with_probability_one_over_n() {
    let (n, samples) = (7u32, 200_000u64);
    let mut rng = worker_rng(5, 0);
    let hits = (0..samples).filter(|_| sample_permutation(n, &mut rng).cycle_lengths() == [n]).count();
    let p = 1.0 / n as f64;
    let sigma = (p * (1.0 - p) / samples as f64).sqrt();
    assert!((hits as f64 / samples as f64 - p).abs() <= 4.0 * sigma);
}

#[test]
fn cycle_type_examples() {
    assert_eq!(cycle_type(&Permutation::identity(4)).parts(), &[1, 1, 1, 1]);
    let p = Permutation::from_cycles(4, &[&[1, 2, 3]]).unwrap();
    assert_eq!(cycle_type(&p).parts(), &[3, 1]);
    let mut rng = worker_rng(11, 3);
    for _ in 0..500 {
        let p = sample_permutation(9, &mut rng);
        assert_eq!(cycle_type(&p).sign(), p.parity_by_inversions());
    }
}

#[test]
fn alternating_conjugacy_matches_exhaustive_search() {
    for n in 1..=6 {
        let evens = all_even(n);
        let index: HashMap<&Permutation, usize> = evens.iter().enumerate().map(|(i, p)| (p, i)).collect();
        for s in &evens {
            let orbit: HashSet<usize> = evens.iter().map(|h| index[&s.conjugate_by(h)]).collect();
            for (j, t) in evens.iter().enumerate() {
                assert_eq!(conjugate_in_alternating(s, t).unwrap(), orbit.contains(&j), "n = {n}: {s} vs {t}");
            }
        }
    }
}

#[test]
fn alternating_conjugacy_is_an_equivalence() {
    let n = 7;
    let mut rng = worker_rng(99, 0);
    let even = |rng: &mut _| loop {
        let p = sample_permutation(n, rng);
        if p.is_even() {
            break p;
        }
    };
    for _ in 0..2000 {
        let a = even(&mut rng);
        // conjugates by random elements keep the cycle type, so the triples
        // exercise the split test rather than just the type comparison
        let b = a.conjugate_by(&sample_permutation(n, &mut rng));
        let c = a.conjugate_by(&sample_permutation(n, &mut rng));
        let ab = conjugate_in_alternating(&a, &b).unwrap();
        let bc = conjugate_in_alternating(&b, &c).unwrap();
        let ac = conjugate_in_alternating(&a, &c).unwrap();
        assert!(conjugate_in_alternating(&a, &a).unwrap());
        assert_eq!(ab, conjugate_in_alternating(&b, &a).unwrap());
        if ab && bc {
            assert!(ac);
        }
        if let Some(pi) = canonical_conjugator(&a, &b) {
            assert_eq!(a.conjugate_by(&pi), b);
        }
    }
}

#[test]
fn estimates_are_reproducible_per_seed_and_worker_count() {
    let a = estimate(Quantity::KappaAlt, 8, 20_000, 42, 4).unwrap();
    let b = estimate(Quantity::KappaAlt, 8, 20_000, 42, 4).unwrap();
    assert_eq!(a, b);
    let c = estimate(Quantity::KappaAlt, 8, 20_000, 43, 4).unwrap();
    assert_ne!(a.hits, c.hits);
    assert_eq!(a.batches.iter().map(|t| t.hits).sum::<u64>(), a.hits);
}

#[test]
fn impossible_event_is_never_observed() {
    let e = estimate(Quantity::QSplit, 2, 100_000, 3, 2).unwrap();
    assert_eq!(e.hits, 0);
    assert_eq!(e.std_error, 0.0);
}

#[test]
fn alternating_four_matches_its_exact_value() {
    let e = estimate(Quantity::KappaAlt, 4, 1_000_000, 17, 4).unwrap();
    assert!(e.within(&ExactQ::ratio(7, 24), 4.0), "z = {}", e.z_score(&ExactQ::ratio(7, 24)));
}

fn every_quantity_up_to_twenty(samples: u64) {
    let engine = Engine::shared();
    for n in 1..=20u32 {
        let mut quantities = vec![Quantity::KappaSym, Quantity::KappaEven, Quantity::QSplit, Quantity::KappaAlt];
        if n >= 2 {
            quantities.push(Quantity::KappaOdd);
        }
        quantities.push(Quantity::SBelow(n.div_ceil(2) + 1));
        for q in quantities {
            let exact = engine.value(q, n).unwrap();
            let e = estimate(q, n, samples, 1000 + n as u64, 2).unwrap();
            assert!(e.within(&exact, 4.0), "{q} at n = {n}: z = {}", e.z_score(&exact));
        }
    }
}

#[test]
fn every_quantity_up_to_twenty_at_reduced_samples() {
    every_quantity_up_to_twenty(50_000);
}

/// Takes several minutes on one core.
#[test]
#[ignore = "long-running; run with --ignored"]
fn every_quantity_up_to_twenty_at_a_million_samples() {
    every_quantity_up_to_twenty(1_000_000);
}

#[test]
fn split_classes_are_conjugate_half_the_time() {
    for n in [3, 5, 8] {
        let r = montecarlo::split_half_rate(n, 100_000, 7, 2).unwrap();
        assert!(r.z_score() <= 4.0, "n = {n}: rate {}", r.rate);
    }
}

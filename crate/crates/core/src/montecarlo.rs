//! Sampling oracle for every probability the exact engine computes.
//!
//! Permutations are drawn with a Fisher-Yates shuffle from ChaCha8. A run
//! with `w` workers gives worker `i` the stream `i` of the generator seeded
//! with `seed`, so results depend only on `(seed, samples, workers)`.
//! Conditioning on parity is done by rejection.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::partition::{self, Parity, Partition};
use crate::permutation::Permutation;
use crate::rational::ExactQ;
use crate::stats::Quantity;

/// Samples per row of the per-batch tally.
pub const BATCH_SIZE: u64 = 1 << 16;

/// Generator for worker `worker` of a run seeded with `seed`.
pub fn worker_rng(seed: u64, worker: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(worker);
    rng
}

/// Uniform element of `S_n`.
pub fn sample_permutation<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Permutation {
    let mut images: Vec<u32> = (0..n).collect();
    images.shuffle(rng);
    Permutation::from_images(images).expect("a shuffle is a bijection")
}

fn sample_with_parity<R: Rng + ?Sized>(n: u32, parity: Parity, rng: &mut R) -> Permutation {
    loop {
        let p = sample_permutation(n, rng);
        if p.parity() == parity {
            return p;
        }
    }
}

pub fn cycle_type(p: &Permutation) -> Partition {
    p.cycle_type()
}

/// The conjugator that sends each cycle of `sigma` onto the matching cycle
/// of `tau`, cycles taken in canonical order (by length, then smallest
/// point, each starting at its smallest point). `None` if the cycle types
/// differ.
pub fn canonical_conjugator(sigma: &Permutation, tau: &Permutation) -> Option<Permutation> {
    if sigma.degree() != tau.degree() {
        return None;
    }
    let (a, b) = (sigma.cycles(), tau.cycles());
    if a.len() != b.len() || a.iter().zip(&b).any(|(x, y)| x.len() != y.len()) {
        return None;
    }
    let mut images = vec![0; sigma.degree() as usize];
    for (x, y) in a.iter().zip(&b) {
        for (&from, &to) in x.iter().zip(y) {
            images[from as usize] = to;
        }
    }
    Some(Permutation::from_images(images).expect("cycles cover every point once"))
}

/// Whether two even permutations are conjugate in `A_n`.
pub fn conjugate_in_alternating(sigma: &Permutation, tau: &Permutation) -> Result<bool, Error> {
    if sigma.degree() != tau.degree() {
        return Err(Error::usage(format!(
            "degree mismatch: {} and {}",
            sigma.degree(),
            tau.degree()
        )));
    }
    if !sigma.is_even() || !tau.is_even() {
        return Err(Error::usage("conjugacy in A_n needs two even permutations"));
    }
    let Some(pi) = canonical_conjugator(sigma, tau) else {
        return Ok(false);
    };
    if !partition::is_split(&sigma.cycle_lengths()) {
        return Ok(true);
    }
    Ok(pi.is_even())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BatchTally {
    pub worker: u64,
    pub batch: u64,
    pub samples: u64,
    pub hits: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub quantity: Quantity,
    pub n: u32,
    pub hits: u64,
    pub samples: u64,
    /// `hits/samples`, exact
    pub point: ExactQ,
    /// `sqrt(p(1-p)/samples)` at the observed `p`
    pub std_error: f64,
    pub seed: u64,
    pub workers: u64,
    #[serde(skip)]
    pub batches: Vec<BatchTally>,
}

impl McEstimate {
    /// `|point − exact| / std_error`; infinite when the error is zero and the
    /// values differ.
    pub fn z_score(&self, exact: &ExactQ) -> f64 {
        let diff = (&self.point - exact).abs().to_f64();
        if diff == 0.0 {
            0.0
        } else {
            diff / self.std_error
        }
    }

    pub fn within(&self, exact: &ExactQ, sigmas: f64) -> bool {
        self.z_score(exact) <= sigmas
    }

    fn from_batches(quantity: Quantity, n: u32, seed: u64, workers: u64, batches: Vec<BatchTally>) -> McEstimate {
        let samples: u64 = batches.iter().map(|b| b.samples).sum();
        let hits: u64 = batches.iter().map(|b| b.hits).sum();
        let point = ExactQ::new(hits, samples.max(1)).expect("positive");
        let p = point.to_f64();
        let std_error = (p * (1.0 - p) / samples.max(1) as f64).sqrt();
        McEstimate { quantity, n, hits, samples, point, std_error, seed, workers, batches }
    }
}

fn trial<R: Rng + ?Sized>(quantity: Quantity, n: u32, rng: &mut R) -> bool {
    match quantity {
        Quantity::KappaSym => {
            sample_permutation(n, rng).cycle_lengths() == sample_permutation(n, rng).cycle_lengths()
        }
        Quantity::KappaEven | Quantity::KappaOdd => {
            let parity = if quantity == Quantity::KappaEven { Parity::Even } else { Parity::Odd };
            sample_with_parity(n, parity, rng).cycle_lengths()
                == sample_with_parity(n, parity, rng).cycle_lengths()
        }
        Quantity::QSplit => {
            let a = sample_permutation(n, rng).cycle_lengths();
            partition::is_split(&a) && a == sample_permutation(n, rng).cycle_lengths()
        }
        Quantity::KappaAlt => {
            let s = sample_with_parity(n, Parity::Even, rng);
            let t = sample_with_parity(n, Parity::Even, rng);
            conjugate_in_alternating(&s, &t).expect("both even")
        }
        Quantity::SBelow(k) => {
            sample_permutation(n, rng).cycle_lengths().first().is_none_or(|&longest| longest < k)
        }
    }
}

fn run_workers(
    samples: u64,
    seed: u64,
    workers: u64,
    draw: impl Fn(&mut ChaCha8Rng) -> bool + Sync,
) -> Vec<BatchTally> {
    let per: Vec<(u64, u64)> =
        (0..workers).map(|w| (w, samples / workers + u64::from(w < samples % workers))).collect();
    let nested: Vec<Vec<BatchTally>> = per
        .into_par_iter()
        .map(|(worker, count)| {
            let mut rng = worker_rng(seed, worker);
            let mut out = Vec::new();
            let mut done = 0;
            while done < count {
                let size = BATCH_SIZE.min(count - done);
                let hits = (0..size).filter(|_| draw(&mut rng)).count() as u64;
                out.push(BatchTally { worker, batch: out.len() as u64, samples: size, hits });
                done += size;
            }
            out
        })
        .collect();
    nested.into_iter().flatten().collect()
}

fn check_run(samples: u64, workers: u64) -> Result<(), Error> {
    if samples == 0 {
        return Err(Error::usage("samples must be positive"));
    }
    if workers == 0 {
        return Err(Error::usage("workers must be positive"));
    }
    Ok(())
}

/// Bernoulli estimate of `quantity` at `n`.
pub fn estimate(
    quantity: Quantity,
    n: u32,
    samples: u64,
    seed: u64,
    workers: u64,
) -> Result<McEstimate, Error> {
    check_run(samples, workers)?;
    if n == 0 {
        return Err(Error::usage("sampling needs n >= 1"));
    }
    if quantity == Quantity::KappaOdd && n < 2 {
        return Err(Error::Degenerate(format!("S_{n} has no odd permutations to condition on")));
    }
    if quantity == Quantity::SBelow(0) {
        return Err(Error::usage("s_below needs k >= 1"));
    }
    let batches = run_workers(samples, seed, workers, move |rng| trial(quantity, n, rng));
    Ok(McEstimate::from_batches(quantity, n, seed, workers, batches))
}

/// Rate at which two `S_n`-conjugate elements of a split class are also
/// `A_n`-conjugate, which should be one half.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplitHalfRate {
    pub n: u32,
    pub pairs: u64,
    pub conjugate: u64,
    pub rate: ExactQ,
    pub std_error: f64,
    pub seed: u64,
    pub workers: u64,
}

impl SplitHalfRate {
    pub fn z_score(&self) -> f64 {
        let diff = (&self.rate - &ExactQ::ratio(1, 2)).abs().to_f64();
        if diff == 0.0 {
            0.0
        } else {
            diff / self.std_error
        }
    }
}

/// Draws `σ` uniformly among even permutations of split cycle type, conjugates
/// it by a uniform `π ∈ S_n` and records whether `σ` and `πσπ⁻¹` are
/// conjugate in `A_n`.
pub fn split_half_rate(n: u32, pairs: u64, seed: u64, workers: u64) -> Result<SplitHalfRate, Error> {
    check_run(pairs, workers)?;
    if n < 3 {
        return Err(Error::Degenerate(format!("S_{n} has no class that splits in A_{n}")));
    }
    let draw = move |rng: &mut ChaCha8Rng| {
        let sigma = loop {
            let s = sample_permutation(n, rng);
            if s.is_even() && partition::is_split(&s.cycle_lengths()) {
                break s;
            }
        };
        let pi = sample_permutation(n, rng);
        let tau = sigma.conjugate_by(&pi);
        conjugate_in_alternating(&sigma, &tau).expect("conjugates of an even permutation are even")
    };
    let batches = run_workers(pairs, seed, workers, draw);
    let conjugate: u64 = batches.iter().map(|b| b.hits).sum();
    let rate = ExactQ::new(conjugate, pairs)?;
    let p = rate.to_f64();
    Ok(SplitHalfRate {
        n,
        pairs,
        conjugate,
        std_error: (p * (1.0 - p) / pairs as f64).sqrt(),
        rate,
        seed,
        workers,
    })
}

//! Exhaustive oracle over the whole group.
//!
//! Walks every element of `S_n`, tallies cycle types element by element and
//! finds the classes of `A_n` as orbits under conjugation by even
//! permutations. Nothing here uses centralizer orders, signs of partitions or
//! the split criterion for `A_n`, so it checks the formula-based routes
//! independently.

use std::collections::{BTreeMap, HashMap};

use rug::Integer;

use crate::error::Error;
use crate::partition::{self, Parity};
use crate::permutation::Permutation;
use crate::rational::ExactQ;
use crate::stats::{Method, ProbTable, Quantity};

/// Cost guard: `8! = 40320` elements.
pub const BRUTE_FORCE_LIMIT: u32 = 8;

/// Every quantity at `n` from explicit enumeration of `S_n`: one single-entry
/// table per quantity, with `s_below(k)` for `1 ≤ k ≤ n + 1`.
pub fn brute_force_table(n: u32) -> Result<Vec<ProbTable>, Error> {
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::OutOfRange { n, min: 0, max: BRUTE_FORCE_LIMIT });
    }
    let tally = Tally::collect(n);
    let mut tables = vec![
        single(Quantity::KappaSym, n, tally.kappa_sym()),
        single(Quantity::KappaEven, n, tally.kappa_even()),
        single(Quantity::KappaOdd, n, tally.kappa_odd()),
        single(Quantity::QSplit, n, tally.q_split()),
        single(Quantity::KappaAlt, n, tally.kappa_alt()),
    ];
    for k in 1..=n + 1 {
        tables.push(single(Quantity::SBelow(k), n, tally.s_below(k)));
    }
    Ok(tables)
}

/// A single brute-force value.
pub fn brute_force_value(quantity: Quantity, n: u32) -> Result<ExactQ, Error> {
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::OutOfRange { n, min: 0, max: BRUTE_FORCE_LIMIT });
    }
    let tally = Tally::collect(n);
    Ok(match quantity {
        Quantity::KappaSym => tally.kappa_sym(),
        Quantity::KappaEven => tally.kappa_even(),
        Quantity::KappaOdd => tally.kappa_odd(),
        Quantity::QSplit => tally.q_split(),
        Quantity::KappaAlt => tally.kappa_alt(),
        Quantity::SBelow(0) => return Err(Error::usage("s_below needs k >= 1")),
        Quantity::SBelow(k) => tally.s_below(k),
    })
}

fn single(quantity: Quantity, n: u32, v: ExactQ) -> ProbTable {
    ProbTable { quantity, method: Method::BruteForce, values: BTreeMap::from([(n, v)]) }
}

struct Tally {
    order: u64,
    even_order: u64,
    odd_order: u64,
    /// cycle type -> (element count, parity by inversions)
    types: HashMap<Vec<u32>, (u64, Parity)>,
    /// elements whose longest cycle has the given length
    by_longest: BTreeMap<u32, u64>,
    alt_class_sizes: Vec<u64>,
}

impl Tally {
    fn collect(n: u32) -> Tally {
        let mut types: HashMap<Vec<u32>, (u64, Parity)> = HashMap::new();
        let mut by_longest = BTreeMap::new();
        let mut evens = Vec::new();
        let (mut order, mut even_order) = (0u64, 0u64);
        let mut p = Permutation::identity(n);
        loop {
            order += 1;
            let parity = p.parity_by_inversions();
            let lengths = p.cycle_lengths();
            *by_longest.entry(lengths.first().copied().unwrap_or(0)).or_insert(0) += 1;
            let entry = types.entry(lengths).or_insert((0, parity));
            entry.0 += 1;
            if parity == Parity::Even {
                even_order += 1;
                evens.push(p.clone());
            }
            if !p.next_lexicographic() {
                break;
            }
        }
        Tally {
            order,
            even_order,
            odd_order: order - even_order,
            types,
            by_longest,
            alt_class_sizes: alternating_class_sizes(&evens),
        }
    }

    fn sum_sq(&self, keep: impl Fn(&[u32], Parity) -> bool, total: u64) -> ExactQ {
        if total == 0 {
            return ExactQ::zero();
        }
        let num: Integer = self
            .types
            .iter()
            .filter(|(t, (_, parity))| keep(t, *parity))
            .map(|(_, (c, _))| Integer::from(*c) * Integer::from(*c))
            .sum();
        ExactQ::new(num, Integer::from(total) * Integer::from(total)).expect("total > 0")
    }

    fn kappa_sym(&self) -> ExactQ {
        self.sum_sq(|_, _| true, self.order)
    }

    fn kappa_even(&self) -> ExactQ {
        self.sum_sq(|_, p| p == Parity::Even, self.even_order)
    }

    /// Zero when the group has no odd elements (`n ≤ 1`).
    fn kappa_odd(&self) -> ExactQ {
        self.sum_sq(|_, p| p == Parity::Odd, self.odd_order)
    }

    fn q_split(&self) -> ExactQ {
        self.sum_sq(|t, _| partition::is_split(t), self.order)
    }

    fn kappa_alt(&self) -> ExactQ {
        let num: Integer =
            self.alt_class_sizes.iter().map(|&c| Integer::from(c) * Integer::from(c)).sum();
        let den = Integer::from(self.even_order) * Integer::from(self.even_order);
        ExactQ::new(num, den).expect("A_n is nonempty")
    }

    fn s_below(&self, k: u32) -> ExactQ {
        let hits: u64 = self.by_longest.range(..k).map(|(_, c)| c).sum();
        ExactQ::new(hits, self.order).expect("S_n is nonempty")
    }
}

/// Sizes of the conjugacy classes of the group formed by `evens`, found as
/// orbits under conjugation by its own elements.
fn alternating_class_sizes(evens: &[Permutation]) -> Vec<u64> {
    let index: HashMap<&Permutation, usize> =
        evens.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut assigned = vec![false; evens.len()];
    let mut sizes = Vec::new();
    for (i, g) in evens.iter().enumerate() {
        if assigned[i] {
            continue;
        }
        let mut size = 0u64;
        for h in evens {
            let c = g.conjugate_by(h);
            let j = index[&c];
            if !assigned[j] {
                assigned[j] = true;
                size += 1;
            }
        }
        sizes.push(size);
    }
    sizes
}

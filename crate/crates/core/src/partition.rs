//! Integer partitions as cycle types.

use std::fmt;

use rug::Integer;
use serde::Serialize;

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(v: u64) -> Parity {
        if v % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// A partition of `n`, read as the cycle type of a permutation of `n`
/// points. Parts are kept in non-increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Sorts the given parts; zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self, Error> {
        if parts.contains(&0) {
            return Err(Error::usage("partition parts must be positive"));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// The integer being partitioned.
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `(part, multiplicity)` pairs, largest part first.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        multiplicities(&self.parts)
    }

    /// `∏_d d^{m_d} · m_d!`, the order of the centralizer in `S_n` of any
    /// permutation with this cycle type.
    pub fn centralizer_order(&self) -> Integer {
        centralizer_order(&self.parts)
    }

    /// Number of permutations with this cycle type, `n! / z_λ`.
    pub fn class_size(&self) -> Integer {
        let z = self.centralizer_order();
        Integer::from(Integer::factorial(self.size())).div_exact(&z)
    }

    /// Parity of any permutation with this cycle type: `(-1)^{n - #parts}`.
    pub fn sign(&self) -> Parity {
        sign(&self.parts)
    }

    /// A class of even permutations splits in `A_n` exactly when its parts
    /// are odd and pairwise distinct.
    pub fn is_split(&self) -> bool {
        is_split(&self.parts)
    }

    pub fn max_part(&self) -> u32 {
        self.parts.first().copied().unwrap_or(0)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

pub(crate) fn multiplicities(parts: &[u32]) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = Vec::new();
    for &p in parts {
        match out.last_mut() {
            Some((q, m)) if *q == p => *m += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

pub(crate) fn centralizer_order(parts: &[u32]) -> Integer {
    let mut z = Integer::from(1);
    for (d, m) in multiplicities(parts) {
        z *= Integer::from(Integer::u_pow_u(d, m));
        z *= Integer::from(Integer::factorial(m));
    }
    z
}

pub(crate) fn sign(parts: &[u32]) -> Parity {
    let n: u64 = parts.iter().map(|&p| p as u64).sum();
    Parity::of(n - parts.len() as u64)
}

pub(crate) fn is_split(parts: &[u32]) -> bool {
    parts.iter().all(|p| p % 2 == 1) && parts.windows(2).all(|w| w[0] != w[1])
}

/// Walks the partitions of `n` with parts at most `max_part` in reverse
/// lexicographic order, starting from the one with the largest parts and
/// ending at `1^n`. The current partition is borrowed, so tight loops avoid
/// allocating.
#[derive(Clone, Debug)]
pub struct PartitionWalker {
    parts: Vec<u32>,
    started: bool,
    done: bool,
}

impl PartitionWalker {
    pub fn new(n: u32, max_part: u32) -> Self {
        let mut parts = Vec::new();
        let mut done = false;
        if n > 0 {
            if max_part == 0 {
                done = true;
            } else {
                let m = max_part.min(n);
                parts.resize((n / m) as usize, m);
                if n % m > 0 {
                    parts.push(n % m);
                }
            }
        }
        PartitionWalker { parts, started: false, done }
    }

    /// Moves to the next partition and returns it, or `None` once exhausted.
    pub fn advance(&mut self) -> Option<&[u32]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.parts);
        }
        let Some(j) = self.parts.iter().rposition(|&p| p > 1) else {
            self.done = true;
            return None;
        };
        let ones = (self.parts.len() - 1 - j) as u32;
        let v = self.parts[j] - 1;
        self.parts.truncate(j + 1);
        self.parts[j] = v;
        let mut rest = ones + 1;
        while rest >= v {
            self.parts.push(v);
            rest -= v;
        }
        if rest > 0 {
            self.parts.push(rest);
        }
        Some(&self.parts)
    }
}

/// Iterator over the partitions of `n` in reverse lexicographic order.
#[derive(Clone, Debug)]
pub struct Partitions {
    walker: PartitionWalker,
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        self.walker.advance().map(|p| Partition { parts: p.to_vec() })
    }
}

/// Every partition of `n` exactly once; `n = 0` yields the empty partition.
pub fn partitions(n: u32) -> Partitions {
    Partitions { walker: PartitionWalker::new(n, n) }
}

/// Partitions of `n` whose parts are all at most `max_part`.
pub fn partitions_bounded(n: u32, max_part: u32) -> Partitions {
    Partitions { walker: PartitionWalker::new(n, max_part) }
}

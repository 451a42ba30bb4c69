//! Permutations of `{1..n}`, stored 0-based.

use std::fmt;

use crate::error::Error;
use crate::partition::{Parity, Partition};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: u32) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// `images[i]` is the image of point `i` (0-based). Fails unless the map
    /// is a bijection.
    pub fn from_images(images: Vec<u32>) -> Result<Self, Error> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let slot = seen
                .get_mut(x as usize)
                .ok_or_else(|| Error::usage(format!("image {x} outside 0..{n}")))?;
            if std::mem::replace(slot, true) {
                return Err(Error::usage(format!("image {x} repeated")));
            }
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of `n` points from disjoint cycles written with
    /// 1-based points, e.g. `&[&[1, 2, 3]]` for `1→2→3→1`.
    pub fn from_cycles(n: u32, cycles: &[&[u32]]) -> Result<Self, Error> {
        let mut images: Vec<u32> = (0..n).collect();
        let mut used = vec![false; n as usize];
        for cycle in cycles {
            for (i, &p) in cycle.iter().enumerate() {
                if p == 0 || p > n {
                    return Err(Error::usage(format!("point {p} outside 1..={n}")));
                }
                if std::mem::replace(&mut used[p as usize - 1], true) {
                    return Err(Error::usage(format!("point {p} appears twice")));
                }
                let next = cycle[(i + 1) % cycle.len()];
                images[p as usize - 1] = next - 1;
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> u32 {
        self.images.len() as u32
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn apply(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation { images: other.images.iter().map(|&x| self.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// `by ∘ self ∘ by⁻¹`, which maps `by(i)` to `by(self(i))`.
    pub fn conjugate_by(&self, by: &Permutation) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[by.images[i] as usize] = by.images[x as usize];
        }
        Permutation { images }
    }

    /// Cycles (fixed points included) in canonical order: each cycle starts at
    /// its smallest point, and cycles are sorted by `(length, smallest point)`.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x as u32);
                x = self.images[x] as usize;
            }
            cycles.push(cycle);
        }
        // scanning starts from the smallest unseen point, so every cycle
        // already leads with its minimum
        cycles.sort_by_key(|c| (c.len(), c[0]));
        cycles
    }

    pub fn cycle_lengths(&self) -> Vec<u32> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = self.images[x] as usize;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }

    pub fn cycle_type(&self) -> Partition {
        Partition::new(self.cycle_lengths()).expect("cycle lengths are positive")
    }

    /// Parity from the number of cycles.
    pub fn parity(&self) -> Parity {
        let cycles = self.cycle_lengths().len() as u64;
        Parity::of(self.images.len() as u64 - cycles)
    }

    /// Parity from the inversion count; quadratic, kept as an independent check.
    pub fn parity_by_inversions(&self) -> Parity {
        let mut inversions = 0u64;
        for i in 0..self.images.len() {
            for j in (i + 1)..self.images.len() {
                if self.images[i] > self.images[j] {
                    inversions += 1;
                }
            }
        }
        Parity::of(inversions)
    }

    pub fn is_even(&self) -> bool {
        self.parity() == Parity::Even
    }

    /// Lexicographic successor in place; returns `false` after the last one.
    pub(crate) fn next_lexicographic(&mut self) -> bool {
        let v = &mut self.images;
        let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
            return false;
        };
        let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot has a successor");
        v.swap(i - 1, j);
        v[i..].reverse();
        true
    }
}

/// Cycle notation with 1-based points; fixed points are omitted and the
/// identity prints as `()`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for cycle in self.cycles().into_iter().filter(|c| c.len() > 1) {
            any = true;
            f.write_str("(")?;
            for (i, p) in cycle.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            f.write_str(")")?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

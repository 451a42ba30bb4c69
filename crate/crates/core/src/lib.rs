//! Exact conjugacy probabilities of symmetric and alternating groups.
//!
//! The crate computes, as exact rationals, the probability that two random
//! permutations are conjugate in `S_n` (overall, given both even, given both
//! odd), that they share a class that splits in `A_n`, that a permutation has
//! only short cycles, and the conjugacy probability in `A_n` itself. On top
//! of those sequences it machine-checks a family of inequalities and
//! numeric certificates, encloses the limits of `n²κ(A_n)` along even and
//! odd `n`, and cross-validates everything by Monte Carlo.
//!
//! ```
//! use kappa_lab::{Engine, ExactQ};
//!
//! let engine = Engine::new(40);
//! assert_eq!(engine.kappa_alt(4)?, ExactQ::ratio(7, 24));
//! # Ok::<(), kappa_lab::Error>(())
//! ```

pub mod bounds;
pub mod brute;
mod error;
pub mod export;
pub mod interval;
pub mod limits;
pub mod montecarlo;
pub mod partition;
pub mod permutation;
pub mod rational;
pub mod series;
pub mod stats;

pub use error::Error;
pub use partition::{partitions, Parity, Partition};
pub use permutation::Permutation;
pub use rational::{ExactQ, Rounding};
pub use series::PowerSeries;
pub use stats::{Engine, Method, ProbTable, Quantity};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/exact-values.md")]
    mod exact_values {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/limits.md")]
    mod limits {}
    #[doc = include_str!("../../../book/src/monte-carlo.md")]
    mod monte_carlo {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

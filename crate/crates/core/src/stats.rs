//! Conjugacy probabilities of `S_n` and `A_n`, computed exactly.
//!
//! Every quantity has two independent routes:
//!
//! * **enumeration** walks the partitions of `n` and sums class sizes, which
//!   is the method of record for `n ≤ 60`;
//! * **generating functions** read the value off a truncated product or
//!   exponential, which is the method of record above that.
//!
//! A third route, explicit enumeration of the group, lives in
//! [`crate::brute`] and is limited to `n ≤ 8`.
//!
//! # Boundary conventions
//!
//! For `n ∈ {0, 1}` there are no odd permutations, so the conditional
//! probabilities are fixed by convention: `κ_E = 1`, `κ_O = 0`, `κ(A_n) = 1`,
//! `Q = 1`, `κ = 1`.
//!
//! The recursions for `κ_E` and the constants `A₁`, `A₂` need a different
//! value at `m ∈ {0, 1}`: they weight the leftover `m` points by
//! `4 · Σ_{even λ ⊢ m} z_λ⁻²` (see [`Engine::even_weight`]). That expression
//! equals `κ_E(S_m)` for `m ≥ 2` and is `4` for `m ≤ 1`, because once a long
//! cycle of odd length is fixed the remaining one or zero points are even
//! with certainty rather than with probability one half.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use rug::Integer;
use serde::Serialize;

use crate::brute;
use crate::error::Error;
use crate::partition::{self, Parity, PartitionWalker};
use crate::rational::ExactQ;
use crate::series::PowerSeries;

/// Default truncation order of every generating function.
pub const DEFAULT_ORDER: u32 = 300;

/// Largest `n` computed by walking partitions (`p(60) = 966467`).
pub const ENUMERATION_LIMIT: u32 = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantity {
    /// `κ(S_n)`
    KappaSym,
    /// `κ_E(S_n)`, both permutations conditioned to be even
    KappaEven,
    /// `κ_O(S_n)`, both permutations conditioned to be odd
    KappaOdd,
    /// `Q(S_n)`, same cycle type made of distinct odd parts
    QSplit,
    /// `s_k(n)`, every cycle shorter than `k`
    SBelow(u32),
    /// `κ(A_n)`
    KappaAlt,
}

impl Quantity {
    pub fn name(&self) -> &'static str {
        match self {
            Quantity::KappaSym => "kappa_sym",
            Quantity::KappaEven => "kappa_even",
            Quantity::KappaOdd => "kappa_odd",
            Quantity::QSplit => "q_split",
            Quantity::SBelow(_) => "s_below",
            Quantity::KappaAlt => "kappa_alt",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::SBelow(k) => write!(f, "s_below({k})"),
            other => f.write_str(other.name()),
        }
    }
}

impl Serialize for Quantity {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Parses `kappa_sym`, `kappa_even`, `kappa_odd`, `q_split`, `kappa_alt` and
/// `s_below(k)`.
impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        Ok(match s {
            "kappa_sym" => Quantity::KappaSym,
            "kappa_even" => Quantity::KappaEven,
            "kappa_odd" => Quantity::KappaOdd,
            "q_split" => Quantity::QSplit,
            "kappa_alt" => Quantity::KappaAlt,
            _ => {
                let k = s
                    .strip_prefix("s_below(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|k| k.trim().parse::<u32>().ok())
                    .ok_or_else(|| Error::usage(format!("unknown quantity {s:?}")))?;
                Quantity::SBelow(k)
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Enumeration,
    GeneratingFunction,
    BruteForce,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Enumeration => "enumeration",
            Method::GeneratingFunction => "generating_function",
            Method::BruteForce => "brute_force",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbTable {
    pub quantity: Quantity,
    pub method: Method,
    pub values: BTreeMap<u32, ExactQ>,
}

/// Class-size sums for one `n`, gathered in a single walk over its
/// partitions. All sums are integers; dividing by `n!` or `n!²` gives the
/// probabilities.
#[derive(Clone, Debug)]
pub struct ClassSums {
    pub n: u32,
    pub factorial: Integer,
    /// `Σ c_λ` over all classes; always `n!`.
    pub classes: Integer,
    /// `Σ c_λ` over even classes; `n!/2` for `n ≥ 2`.
    pub even_classes: Integer,
    pub all_sq: Integer,
    pub even_sq: Integer,
    pub odd_sq: Integer,
    /// `Σ c_λ²` over split classes.
    pub split_sq: Integer,
    /// `Σ c_λ` grouped by largest part (index = largest part).
    pub by_max_part: Vec<Integer>,
}

impl ClassSums {
    pub fn compute(n: u32) -> ClassSums {
        let factorial = Integer::from(Integer::factorial(n));
        let mut sums = ClassSums {
            n,
            factorial: factorial.clone(),
            classes: Integer::new(),
            even_classes: Integer::new(),
            all_sq: Integer::new(),
            even_sq: Integer::new(),
            odd_sq: Integer::new(),
            split_sq: Integer::new(),
            by_max_part: vec![Integer::new(); n as usize + 1],
        };
        let mut walker = PartitionWalker::new(n, n);
        let mut z = Integer::new();
        let mut class = Integer::new();
        let mut sq = Integer::new();
        while let Some(parts) = walker.advance() {
            z.assign_centralizer(parts);
            class.assign_quotient(&factorial, &z);
            sq.assign_square(&class);
            sums.classes += &class;
            sums.all_sq += &sq;
            sums.by_max_part[parts.first().copied().unwrap_or(0) as usize] += &class;
            match partition::sign(parts) {
                Parity::Even => {
                    sums.even_classes += &class;
                    sums.even_sq += &sq;
                    if partition::is_split(parts) {
                        sums.split_sq += &sq;
                    }
                }
                Parity::Odd => sums.odd_sq += &sq,
            }
        }
        sums
    }

    fn over_factorial_sq(&self, v: &Integer) -> ExactQ {
        let f2 = Integer::from(self.factorial.square_ref());
        ExactQ::new(v.clone(), f2).expect("n! is positive")
    }

    pub fn kappa_sym(&self) -> ExactQ {
        self.over_factorial_sq(&self.all_sq)
    }

    /// `4 · Σ_{even λ} z_λ⁻²`.
    pub fn even_weight(&self) -> ExactQ {
        self.over_factorial_sq(&self.even_sq) * ExactQ::from_int(4)
    }

    /// `4 · Σ_{odd λ} z_λ⁻²`.
    pub fn odd_weight(&self) -> ExactQ {
        self.over_factorial_sq(&self.odd_sq) * ExactQ::from_int(4)
    }

    pub fn q_split(&self) -> ExactQ {
        self.over_factorial_sq(&self.split_sq)
    }

    /// Direct class sum over `A_n`: a non-split class contributes `4/z²`,
    /// each split class its two halves, `2/z²` in total.
    pub fn kappa_alt_direct(&self) -> ExactQ {
        let non_split = Integer::from(&self.even_sq - &self.split_sq);
        let num = non_split * 4u32 + Integer::from(&self.split_sq * 2u32);
        self.over_factorial_sq(&num)
    }

    /// `s_k(n)` from the largest-part histogram.
    pub fn s_below(&self, k: u32) -> ExactQ {
        let below: Integer = self
            .by_max_part
            .iter()
            .take(k.min(self.n + 1) as usize)
            .fold(Integer::new(), |acc, c| acc + c);
        ExactQ::new(below, self.factorial.clone()).expect("n! is positive")
    }
}

trait IntegerScratch {
    fn assign_centralizer(&mut self, parts: &[u32]);
    fn assign_quotient(&mut self, num: &Integer, den: &Integer);
    fn assign_square(&mut self, v: &Integer);
}

impl IntegerScratch for Integer {
    fn assign_centralizer(&mut self, parts: &[u32]) {
        use rug::Assign;
        self.assign(1);
        let mut i = 0;
        while i < parts.len() {
            let d = parts[i];
            let mut m = 0u32;
            while i < parts.len() && parts[i] == d {
                m += 1;
                i += 1;
                *self *= d;
                *self *= m;
            }
        }
    }

    fn assign_quotient(&mut self, num: &Integer, den: &Integer) {
        use rug::Assign;
        self.assign(num.div_exact_ref(den));
    }

    fn assign_square(&mut self, v: &Integer) {
        use rug::Assign;
        self.assign(v.square_ref());
    }
}

/// Coefficient sequences of the three generating functions, indexed `0..=N`.
#[derive(Clone, Debug)]
pub struct SeriesTables {
    /// `Σ κ(S_n) xⁿ = ∏_d Σ_m x^{dm} / (d^m m!)²`
    pub kappa: Vec<ExactQ>,
    /// Same product with each class weighted by its sign, so that
    /// `Σ_{even λ} z⁻² = (kappa + signed) / 2`.
    pub signed: Vec<ExactQ>,
    /// `Σ Q(S_n) xⁿ = ∏_{d odd} (1 + x^d/d²)`
    pub q: Vec<ExactQ>,
}

impl SeriesTables {
    pub fn compute(order: u32) -> SeriesTables {
        let order = order as usize;
        let (kappa, signed) = rayon::join(
            || kappa_series(order, false).into_coefficients(),
            || kappa_series(order, true).into_coefficients(),
        );
        SeriesTables { kappa, signed, q: q_series(order).into_coefficients() }
    }
}

/// `∏_{d=1..N} Σ_m ε^m x^{dm} / (d^m m!)²`, with `ε = (-1)^{d-1}` when
/// `signed` and `ε = 1` otherwise.
pub fn kappa_series(order: usize, signed: bool) -> PowerSeries {
    let mut acc = PowerSeries::one(order);
    for d in 1..=order {
        let mut coeffs = vec![ExactQ::zero(); order + 1];
        let mut weight = ExactQ::one();
        let step = ExactQ::from(d as u32).pow(2);
        let flip = signed && d % 2 == 0;
        let mut m = 0usize;
        while d * m <= order {
            if m > 0 {
                weight = weight / (&step * &ExactQ::from((m * m) as u32));
                if flip {
                    weight = -weight;
                }
            }
            coeffs[d * m] = weight.clone();
            m += 1;
        }
        let factor = PowerSeries::from_coeffs(order, coeffs);
        acc = acc.mul(&factor).expect("same order");
    }
    acc
}

/// `∏_{d odd} (1 + x^d / d²)` truncated at `order`.
pub fn q_series(order: usize) -> PowerSeries {
    let factors: Vec<(usize, ExactQ)> = (1..=order)
        .step_by(2)
        .map(|d| (d, ExactQ::ratio(1, (d * d) as i64)))
        .collect();
    PowerSeries::product_sparse(order, &factors).expect("degrees are positive")
}

/// `exp(Σ_{d=1}^{k-1} x^d/d)`, whose n-th coefficient is `s_k(n)`.
pub fn s_below_series(k: u32, order: usize) -> PowerSeries {
    let top = (k.saturating_sub(1) as usize).min(order);
    let f = PowerSeries::from_coeffs(
        order,
        (0..=top).map(|d| if d == 0 { ExactQ::zero() } else { ExactQ::ratio(1, d as i64) }),
    );
    f.exp().expect("constant term is zero")
}

/// Computes and caches every sequence up to a fixed truncation order. Caches
/// are write-once: a slot is filled the first time it is needed and never
/// changes afterwards, so concurrent readers always see the same values.
pub struct Engine {
    order: u32,
    enumeration: Vec<OnceLock<Arc<ClassSums>>>,
    series: OnceLock<Arc<SeriesTables>>,
    s_series: Mutex<BTreeMap<u32, Arc<Vec<ExactQ>>>>,
}

impl fmt::Debug for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Engine").field("order", &self.order).finish_non_exhaustive()
    }
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new(DEFAULT_ORDER)
    }
}

impl Engine {
    pub fn new(order: u32) -> Engine {
        let slots = order.min(ENUMERATION_LIMIT) as usize + 1;
        Engine {
            order,
            enumeration: (0..slots).map(|_| OnceLock::new()).collect(),
            series: OnceLock::new(),
            s_series: Mutex::new(BTreeMap::new()),
        }
    }

    /// Process-wide engine with the default order.
    pub fn shared() -> &'static Engine {
        static SHARED: OnceLock<Engine> = OnceLock::new();
        SHARED.get_or_init(Engine::default)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    fn check_n(&self, n: u32) -> Result<(), Error> {
        if n > self.order {
            return Err(Error::OutOfRange { n, min: 0, max: self.order });
        }
        Ok(())
    }

    /// Largest `n` served by enumeration.
    pub fn enumeration_limit(&self) -> u32 {
        self.order.min(ENUMERATION_LIMIT)
    }

    /// Which route supplies the value of record for `n`.
    pub fn method_of_record(&self, n: u32) -> Method {
        if n <= self.enumeration_limit() {
            Method::Enumeration
        } else {
            Method::GeneratingFunction
        }
    }

    pub fn class_sums(&self, n: u32) -> Result<Arc<ClassSums>, Error> {
        let slot = self
            .enumeration
            .get(n as usize)
            .ok_or(Error::OutOfRange { n, min: 0, max: self.enumeration_limit() })?;
        Ok(slot.get_or_init(|| Arc::new(ClassSums::compute(n))).clone())
    }

    /// Fills the enumeration cache for `0..=max` in parallel.
    pub fn warm_enumeration(&self, max: u32) -> Result<(), Error> {
        let max = max.min(self.enumeration_limit());
        // largest n first: they dominate the cost
        (0..=max).rev().collect::<Vec<_>>().into_par_iter().try_for_each(|n| self.class_sums(n).map(|_| ()))
    }

    pub fn series(&self) -> Arc<SeriesTables> {
        self.series.get_or_init(|| Arc::new(SeriesTables::compute(self.order))).clone()
    }

    fn s_coefficients(&self, k: u32) -> Arc<Vec<ExactQ>> {
        if let Some(v) = self.s_series.lock().expect("cache lock").get(&k) {
            return v.clone();
        }
        let fresh = Arc::new(s_below_series(k, self.order as usize).into_coefficients());
        // first writer wins; any later value is identical anyway
        self.s_series.lock().expect("cache lock").entry(k).or_insert(fresh).clone()
    }

    /// Value of record for `quantity` at `n`.
    pub fn value(&self, quantity: Quantity, n: u32) -> Result<ExactQ, Error> {
        if let Quantity::SBelow(_) = quantity {
            // the exponential is cheap at every n
            return self.value_by(quantity, n, Method::GeneratingFunction);
        }
        self.value_by(quantity, n, self.method_of_record(n))
    }

    pub fn value_by(&self, quantity: Quantity, n: u32, method: Method) -> Result<ExactQ, Error> {
        if let Quantity::SBelow(0) = quantity {
            return Err(Error::usage("s_below needs k >= 1"));
        }
        match method {
            Method::Enumeration => {
                let sums = self.class_sums(n)?;
                Ok(match quantity {
                    Quantity::KappaSym => sums.kappa_sym(),
                    Quantity::KappaEven => boundary_even(n).unwrap_or_else(|| sums.even_weight()),
                    Quantity::KappaOdd => boundary_odd(n).unwrap_or_else(|| sums.odd_weight()),
                    Quantity::QSplit => sums.q_split(),
                    Quantity::SBelow(k) => sums.s_below(k),
                    Quantity::KappaAlt => {
                        boundary_alt(n).unwrap_or_else(|| sums.even_weight() - sums.q_split() * ExactQ::from_int(2))
                    }
                })
            }
            Method::GeneratingFunction => {
                self.check_n(n)?;
                if let Quantity::SBelow(k) = quantity {
                    return Ok(self.s_coefficients(k)[n as usize].clone());
                }
                let t = self.series();
                let i = n as usize;
                let even = || (&t.kappa[i] + &t.signed[i]) * ExactQ::from_int(2);
                let odd = || (&t.kappa[i] - &t.signed[i]) * ExactQ::from_int(2);
                Ok(match quantity {
                    Quantity::KappaSym => t.kappa[i].clone(),
                    Quantity::KappaEven => boundary_even(n).unwrap_or_else(even),
                    Quantity::KappaOdd => boundary_odd(n).unwrap_or_else(odd),
                    Quantity::QSplit => t.q[i].clone(),
                    Quantity::KappaAlt => {
                        boundary_alt(n).unwrap_or_else(|| even() - &t.q[i] * ExactQ::from_int(2))
                    }
                    Quantity::SBelow(_) => unreachable!(),
                })
            }
            Method::BruteForce => brute::brute_force_value(quantity, n),
        }
    }

    pub fn kappa_sym(&self, n: u32) -> Result<ExactQ, Error> {
        self.value(Quantity::KappaSym, n)
    }

    pub fn kappa_even(&self, n: u32) -> Result<ExactQ, Error> {
        self.value(Quantity::KappaEven, n)
    }

    pub fn kappa_odd(&self, n: u32) -> Result<ExactQ, Error> {
        self.value(Quantity::KappaOdd, n)
    }

    pub fn q_split(&self, n: u32) -> Result<ExactQ, Error> {
        self.value(Quantity::QSplit, n)
    }

    pub fn s_below(&self, k: u32, n: u32) -> Result<ExactQ, Error> {
        self.value(Quantity::SBelow(k), n)
    }

    pub fn kappa_alt(&self, n: u32) -> Result<ExactQ, Error> {
        self.value(Quantity::KappaAlt, n)
    }

    /// `κ(A_n)` straight from the class sum over `A_n`, splitting the classes
    /// with distinct odd parts. Independent of the `κ_E − 2Q` identity.
    pub fn kappa_alt_direct(&self, n: u32) -> Result<ExactQ, Error> {
        if n < 2 {
            return Err(Error::OutOfRange { n, min: 2, max: self.enumeration_limit() });
        }
        Ok(self.class_sums(n)?.kappa_alt_direct())
    }

    /// `4 · Σ_{even λ ⊢ m} z_λ⁻²`: equal to `κ_E(S_m)` for `m ≥ 2` and to `4`
    /// for `m ≤ 1`. This is the weight the leftover `m` points carry in the
    /// long-cycle recursions and in `A₁`, `A₂`.
    pub fn even_weight(&self, m: u32) -> Result<ExactQ, Error> {
        if m < 2 {
            return Ok(ExactQ::from_int(4));
        }
        self.kappa_even(m)
    }

    /// `4 · Σ_{odd λ ⊢ m} z_λ⁻²`: equal to `κ_O(S_m)` for every `m`.
    pub fn odd_weight(&self, m: u32) -> Result<ExactQ, Error> {
        self.kappa_odd(m)
    }

    /// Values for `ns` by a fixed method.
    pub fn table(
        &self,
        quantity: Quantity,
        method: Method,
        ns: impl IntoIterator<Item = u32>,
    ) -> Result<ProbTable, Error> {
        let values = ns
            .into_iter()
            .map(|n| self.value_by(quantity, n, method).map(|v| (n, v)))
            .collect::<Result<_, _>>()?;
        Ok(ProbTable { quantity, method, values })
    }
}

fn boundary_even(n: u32) -> Option<ExactQ> {
    (n < 2).then(ExactQ::one)
}

fn boundary_odd(n: u32) -> Option<ExactQ> {
    (n < 2).then(ExactQ::zero)
}

fn boundary_alt(n: u32) -> Option<ExactQ> {
    (n < 2).then(ExactQ::one)
}

/// `κ(S_n)` from the shared default engine.
pub fn kappa_sym(n: u32) -> Result<ExactQ, Error> {
    Engine::shared().kappa_sym(n)
}

pub fn kappa_even(n: u32) -> Result<ExactQ, Error> {
    Engine::shared().kappa_even(n)
}

pub fn kappa_odd(n: u32) -> Result<ExactQ, Error> {
    Engine::shared().kappa_odd(n)
}

pub fn q_split(n: u32) -> Result<ExactQ, Error> {
    Engine::shared().q_split(n)
}

pub fn s_below(k: u32, n: u32) -> Result<ExactQ, Error> {
    Engine::shared().s_below(k, n)
}

pub fn kappa_alt(n: u32) -> Result<ExactQ, Error> {
    Engine::shared().kappa_alt(n)
}

pub fn kappa_alt_direct(n: u32) -> Result<ExactQ, Error> {
    Engine::shared().kappa_alt_direct(n)
}

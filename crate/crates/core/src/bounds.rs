//! Machine checks of the inequalities, constants and numeric certificates
//! behind the uniform `O(1/n²)` bounds.
//!
//! Each check compares two exact rationals. Where a side involves a
//! logarithm, it is replaced by the end of a certified enclosure that makes
//! the check harder to pass, so a passing verdict never rests on rounding.
//! Decimal thresholds are parsed as exact rationals.
//!
//! A failing check is kept with both sides exact in
//! [`BoundReport::counterexamples`].

use std::fmt;

use rayon::prelude::*;
use rug::Integer;
use serde::Serialize;

use crate::error::Error;
use crate::interval::{self, Interval, DEFAULT_DIGITS};
use crate::rational::ExactQ;
use crate::series::PowerSeries;
use crate::stats::{self, Engine, ENUMERATION_LIMIT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = "<")]
    Below,
    #[serde(rename = "==")]
    Equal,
}

impl Relation {
    fn holds(self, lhs: &ExactQ, rhs: &ExactQ) -> bool {
        match self {
            Relation::AtMost => lhs <= rhs,
            Relation::AtLeast => lhs >= rhs,
            Relation::Below => lhs < rhs,
            Relation::Equal => lhs == rhs,
        }
    }

    /// Slack in the direction of the claim; negative when it fails.
    fn margin(self, lhs: &ExactQ, rhs: &ExactQ) -> ExactQ {
        match self {
            Relation::AtMost | Relation::Below => rhs - lhs,
            Relation::AtLeast => lhs - rhs,
            Relation::Equal => -(lhs - rhs).abs(),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
            Relation::Below => "<",
            Relation::Equal => "==",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Cell {
    pub n: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl Cell {
    pub fn nk(n: u32, k: u32) -> Cell {
        Cell { n, k: Some(k), label: None }
    }

    pub fn n(n: u32) -> Cell {
        Cell { n, k: None, label: None }
    }

    pub fn labeled(n: u32, k: Option<u32>, label: &str) -> Cell {
        Cell { n, k, label: Some(label.to_string()) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    #[serde(flatten)]
    pub cell: Cell,
    pub lhs: ExactQ,
    pub relation: Relation,
    pub rhs: ExactQ,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub claim_id: String,
    pub range_checked: Vec<Cell>,
    pub holds: bool,
    /// Smallest slack over the range; `None` when the range is empty.
    pub worst_margin: Option<ExactQ>,
    pub worst_cell: Option<Cell>,
    pub counterexamples: Vec<Counterexample>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn new(claim_id: &str) -> BoundReport {
        BoundReport {
            claim_id: claim_id.to_string(),
            range_checked: Vec::new(),
            holds: true,
            worst_margin: None,
            worst_cell: None,
            counterexamples: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn check(&mut self, cell: Cell, lhs: ExactQ, relation: Relation, rhs: ExactQ) -> bool {
        let ok = relation.holds(&lhs, &rhs);
        let margin = relation.margin(&lhs, &rhs);
        if self.worst_margin.as_ref().is_none_or(|w| margin < *w) {
            self.worst_margin = Some(margin);
            self.worst_cell = Some(cell.clone());
        }
        self.range_checked.push(cell.clone());
        if !ok {
            self.holds = false;
            self.counterexamples.push(Counterexample { cell, lhs, relation, rhs });
        }
        ok
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Combines reports over disjoint ranges. The result does not depend on
    /// the order of the operands: cells and counterexamples are kept sorted
    /// and ties in the worst margin go to the smaller cell.
    pub fn merge(mut self, other: BoundReport) -> BoundReport {
        self.holds &= other.holds;
        self.range_checked.extend(other.range_checked);
        self.range_checked.sort();
        self.counterexamples.extend(other.counterexamples);
        self.counterexamples.sort_by(|a, b| a.cell.cmp(&b.cell));
        let take_other = match (&self.worst_margin, &other.worst_margin) {
            (None, Some(_)) => true,
            (Some(a), Some(b)) => b < a || (b == a && other.worst_cell < self.worst_cell),
            _ => false,
        };
        if take_other {
            self.worst_margin = other.worst_margin;
            self.worst_cell = other.worst_cell;
        }
        for note in other.notes {
            if !self.notes.contains(&note) {
                self.notes.push(note);
            }
        }
        self
    }

    fn merge_all(claim_id: &str, parts: Vec<BoundReport>) -> BoundReport {
        parts.into_iter().fold(BoundReport::new(claim_id), BoundReport::merge)
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let margin = self
            .worst_margin
            .as_ref()
            .map(|m| m.to_significant(6))
            .unwrap_or_else(|| "n/a".to_string());
        format!(
            "{} {}: {} checks, worst margin {}, {} counterexample(s)",
            if self.holds { "PASS" } else { "FAIL" },
            self.claim_id,
            self.range_checked.len(),
            margin,
            self.counterexamples.len()
        )
    }
}

fn threshold(s: &str) -> ExactQ {
    s.parse().expect("literal threshold")
}

fn sq(v: u32) -> ExactQ {
    ExactQ::from(v).pow(2)
}

/// `C_κ = 13²·κ(S₁₃)`.
pub fn c_kappa(engine: &Engine) -> Result<ExactQ, Error> {
    Ok(sq(13) * engine.kappa_sym(13)?)
}

/// `C₂ = 4²·Q(S₄)`.
pub fn c_two(engine: &Engine) -> Result<ExactQ, Error> {
    Ok(sq(4) * engine.q_split(4)?)
}

/// `Σ Q(S_m)` over `m ≤ 15` of one parity: `odd = true` sums `m = 1, 3, …, 15`.
pub fn q_partial_sum(engine: &Engine, odd: bool, upto: u32) -> Result<ExactQ, Error> {
    let start = if odd { 1 } else { 0 };
    (start..=upto).step_by(2).map(|m| engine.q_split(m)).sum()
}

fn check_range(n: u32, lo: u32, hi: u32) -> Result<(), Error> {
    if n < lo || n > hi {
        return Err(Error::OutOfRange { n, min: lo, max: hi });
    }
    Ok(())
}

/// Long-cycle sum `Σ_{l=k}^{n} w(n-l)/l²`, with the odd-class weight for even
/// `l` and the even-class weight for odd `l`.
fn even_tail(engine: &Engine, n: u32, k: u32) -> Result<ExactQ, Error> {
    let mut acc = ExactQ::zero();
    for l in k..=n {
        let w = if l % 2 == 0 { engine.odd_weight(n - l)? } else { engine.even_weight(n - l)? };
        acc += w / sq(l);
    }
    Ok(acc)
}

fn q_tail(engine: &Engine, n: u32, k: u32) -> Result<ExactQ, Error> {
    let mut acc = ExactQ::zero();
    for l in (k..=n).filter(|l| l % 2 == 1) {
        acc += engine.q_split(n - l)? / sq(l);
    }
    Ok(acc)
}

/// `κ_E(S_n) ≤ s_k(n)² + Σ_{l≥k, l even} κ_O(S_{n-l})/l² + Σ_{l≥k, l odd} κ_E(S_{n-l})/l²`
/// for `2 ≤ k ≤ n ≤ 60`, with `s_k(n)` taken over all of `S_n`.
///
/// The leftover weights at `n - l ∈ {0, 1}` are those of
/// [`Engine::even_weight`]. Taken literally this inequality fails at a few
/// small cells such as `(n, k) = (2, 2)`, where `κ_E(S₂) = 1` but the right
/// side is `1/4`; those are reported as counterexamples.
pub fn verify_prop_even_upper(engine: &Engine, n: u32, k: u32) -> Result<BoundReport, Error> {
    check_range(n, 2, ENUMERATION_LIMIT)?;
    check_range(k, 2, n)?;
    let mut report = BoundReport::new("prop_even_upper");
    let s = engine.s_below(k, n)?;
    let rhs = &s * &s + even_tail(engine, n, k)?;
    report.check(Cell::nk(n, k), engine.kappa_even(n)?, Relation::AtMost, rhs);
    Ok(report)
}

/// The same upper bound with `s_k(n)` replaced by its value conditioned on
/// the permutation being even, which is what the event-counting argument
/// needs. Holds on every cell.
pub fn verify_prop_even_upper_conditioned(
    engine: &Engine,
    n: u32,
    k: u32,
) -> Result<BoundReport, Error> {
    check_range(n, 2, ENUMERATION_LIMIT)?;
    check_range(k, 2, n)?;
    let mut report = BoundReport::new("prop_even_upper_even_conditioned");
    let s = s_below_given_even(k, n);
    let rhs = &s * &s + even_tail(engine, n, k)?;
    report.check(Cell::nk(n, k), engine.kappa_even(n)?, Relation::AtMost, rhs);
    Ok(report)
}

/// Probability that an even permutation of `n ≥ 2` points has all cycles
/// shorter than `k`: `[xⁿ](exp(Σ_{d<k} x^d/d) + exp(Σ_{d<k} (-1)^{d-1} x^d/d))`.
pub fn s_below_given_even(k: u32, n: u32) -> ExactQ {
    let order = n as usize;
    let plain = stats::s_below_series(k, order);
    let top = (k.saturating_sub(1) as usize).min(order);
    let signed = PowerSeries::from_coeffs(
        order,
        (0..=top).map(|d| match d {
            0 => ExactQ::zero(),
            d if d % 2 == 1 => ExactQ::ratio(1, d as i64),
            d => ExactQ::ratio(-1, d as i64),
        }),
    )
    .exp()
    .expect("constant term is zero");
    plain.coefficients()[order].clone() + signed.coefficients()[order].clone()
}

/// `κ_E(S_n) ≥ Σ_{l≥k, l even} κ_O(S_{n-l})/l² + Σ_{l≥k, l odd} κ_E(S_{n-l})/l²`
/// for `n/2 < k ≤ n ≤ 60`.
pub fn verify_prop_even_lower(engine: &Engine, n: u32, k: u32) -> Result<BoundReport, Error> {
    check_range(n, 2, ENUMERATION_LIMIT)?;
    if 2 * k <= n || k > n {
        return Err(Error::usage(format!("lower bound needs n/2 < k <= n, got n = {n}, k = {k}")));
    }
    let mut report = BoundReport::new("prop_even_lower");
    report.check(Cell::nk(n, k), engine.kappa_even(n)?, Relation::AtLeast, even_tail(engine, n, k)?);
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Upper,
    Lower,
}

/// Upper: `Q(S_n) ≤ s_k(n)² + Σ_{l≥k, l odd} Q(S_{n-l})/l²` for `2 ≤ k ≤ n`.
/// Lower: `Q(S_n) ≥ Σ_{l≥k, l odd} Q(S_{n-l})/l²` for `n/2 < k ≤ n`.
pub fn verify_prop_q(
    engine: &Engine,
    n: u32,
    k: u32,
    direction: Direction,
) -> Result<BoundReport, Error> {
    check_range(n, 2, ENUMERATION_LIMIT)?;
    let tail = q_tail(engine, n, k.max(1))?;
    let q = engine.q_split(n)?;
    let report = match direction {
        Direction::Upper => {
            check_range(k, 2, n)?;
            let mut r = BoundReport::new("prop_q_upper");
            let s = engine.s_below(k, n)?;
            r.check(Cell::nk(n, k), q, Relation::AtMost, &s * &s + tail);
            r
        }
        Direction::Lower => {
            if 2 * k <= n || k > n {
                return Err(Error::usage(format!(
                    "lower bound needs n/2 < k <= n, got n = {n}, k = {k}"
                )));
            }
            let mut r = BoundReport::new("prop_q_lower");
            r.check(Cell::nk(n, k), q, Relation::AtLeast, tail);
            r
        }
    };
    Ok(report)
}

fn sweep(
    claim_id: &str,
    cells: Vec<(u32, u32)>,
    f: impl Fn(u32, u32) -> Result<BoundReport, Error> + Sync,
) -> Result<BoundReport, Error> {
    let parts = cells.into_par_iter().map(|(n, k)| f(n, k)).collect::<Result<Vec<_>, _>>()?;
    Ok(BoundReport::merge_all(claim_id, parts))
}

/// Every `2 ≤ k ≤ n ≤ max_n`.
pub fn sweep_prop_even_upper(engine: &Engine, max_n: u32) -> Result<BoundReport, Error> {
    engine.warm_enumeration(max_n)?;
    let mut r = sweep("prop_even_upper", upper_cells(max_n), |n, k| {
        verify_prop_even_upper(engine, n, k)
    })?;
    r.note("s_k(n) is taken over all of S_n, as the inequality is stated");
    Ok(r)
}

pub fn sweep_prop_even_upper_conditioned(engine: &Engine, max_n: u32) -> Result<BoundReport, Error> {
    engine.warm_enumeration(max_n)?;
    let mut r = sweep("prop_even_upper_even_conditioned", upper_cells(max_n), |n, k| {
        verify_prop_even_upper_conditioned(engine, n, k)
    })?;
    r.note("s_k(n) conditioned on the permutation being even");
    Ok(r)
}

/// Every `n ≤ max_n` and `⌊n/2⌋ < k ≤ n`.
pub fn sweep_prop_even_lower(engine: &Engine, max_n: u32) -> Result<BoundReport, Error> {
    engine.warm_enumeration(max_n)?;
    sweep("prop_even_lower", lower_cells(max_n), |n, k| verify_prop_even_lower(engine, n, k))
}

pub fn sweep_prop_q(engine: &Engine, max_n: u32, direction: Direction) -> Result<BoundReport, Error> {
    engine.warm_enumeration(max_n)?;
    let (id, cells) = match direction {
        Direction::Upper => ("prop_q_upper", upper_cells(max_n)),
        Direction::Lower => ("prop_q_lower", lower_cells(max_n)),
    };
    sweep(id, cells, |n, k| verify_prop_q(engine, n, k, direction))
}

fn upper_cells(max_n: u32) -> Vec<(u32, u32)> {
    (2..=max_n).flat_map(|n| (2..=n).map(move |k| (n, k))).collect()
}

fn lower_cells(max_n: u32) -> Vec<(u32, u32)> {
    (2..=max_n).flat_map(|n| (n / 2 + 1..=n).map(move |k| (n, k))).collect()
}

/// `n²·(quantity) ≤ bound` for every `n` in `from..=max_n`.
fn uniform(
    engine: &Engine,
    claim_id: &str,
    from: u32,
    max_n: u32,
    bound: &ExactQ,
    value: impl Fn(u32) -> Result<ExactQ, Error> + Sync,
) -> Result<BoundReport, Error> {
    if max_n > engine.order() {
        return Err(Error::OutOfRange { n: max_n, min: 0, max: engine.order() });
    }
    let parts = (from..=max_n)
        .into_par_iter()
        .map(|n| {
            let mut r = BoundReport::new(claim_id);
            r.check(Cell::n(n), sq(n) * value(n)?, Relation::AtMost, bound.clone());
            Ok(r)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(BoundReport::merge_all(claim_id, parts))
}

/// `n²κ(S_n) ≤ C_κ` for `2 ≤ n ≤ max_n`.
pub fn verify_kappa_uniform(engine: &Engine, max_n: u32) -> Result<BoundReport, Error> {
    let c = c_kappa(engine)?;
    let mut r = uniform(engine, "kappa_uniform_bound", 2, max_n, &c, |n| engine.kappa_sym(n))?;
    r.note(format!("C_kappa = 169*kappa(S_13) = {c}"));
    Ok(r)
}

/// `n²κ_E(S_n) ≤ 4C_κ` for `1 ≤ n ≤ max_n`.
pub fn verify_kappa_even_uniform(engine: &Engine, max_n: u32) -> Result<BoundReport, Error> {
    let c = c_kappa(engine)? * ExactQ::from_int(4);
    uniform(engine, "kappa_even_uniform_bound", 1, max_n, &c, |n| engine.kappa_even(n))
}

/// `n²κ_O(S_n) ≤ 4C_κ` for `1 ≤ n ≤ max_n`.
pub fn verify_kappa_odd_uniform(engine: &Engine, max_n: u32) -> Result<BoundReport, Error> {
    let c = c_kappa(engine)? * ExactQ::from_int(4);
    uniform(engine, "kappa_odd_uniform_bound", 1, max_n, &c, |n| engine.kappa_odd(n))
}

/// `n²Q(S_n) ≤ C₂ = 16/9` for `1 ≤ n ≤ max_n`.
pub fn verify_q_uniform(engine: &Engine, max_n: u32) -> Result<BoundReport, Error> {
    let c = c_two(engine)?;
    let mut r = uniform(engine, "q_uniform_bound", 1, max_n, &c, |n| engine.q_split(n))?;
    r.check(Cell::labeled(4, None, "C_2 = 16*Q(S_4) == 16/9"), c.clone(), Relation::Equal, ExactQ::ratio(16, 9));
    Ok(r)
}

/// The four uniform bounds merged into one report.
pub fn verify_uniform_bounds(engine: &Engine, max_n: u32) -> Result<BoundReport, Error> {
    let parts = vec![
        verify_kappa_uniform(engine, max_n)?,
        verify_kappa_even_uniform(engine, max_n)?,
        verify_kappa_odd_uniform(engine, max_n)?,
        verify_q_uniform(engine, max_n)?,
    ];
    let mut labeled = Vec::new();
    for mut part in parts {
        let id = part.claim_id.clone();
        for cell in part.range_checked.iter_mut().chain(part.counterexamples.iter_mut().map(|c| &mut c.cell)) {
            cell.label.get_or_insert_with(|| id.clone());
        }
        if let Some(cell) = part.worst_cell.as_mut() {
            cell.label.get_or_insert_with(|| id.clone());
        }
        labeled.push(part);
    }
    Ok(BoundReport::merge_all("uniform_bounds", labeled))
}

/// `n·s₁₅(n) ≥ (n+1)·s₁₅(n+1)` for `14 ≤ n ≤ max_n` (the printed range is
/// `14..=60`; larger `max_n` extends the sweep).
pub fn verify_s15_monotone(max_n: u32) -> Result<BoundReport, Error> {
    if max_n < 14 {
        return Err(Error::OutOfRange { n: max_n, min: 14, max: u32::MAX });
    }
    let s = stats::s_below_series(15, max_n as usize + 1).into_coefficients();
    let mut r = BoundReport::new("s15_monotone");
    for n in 14..=max_n {
        let here = ExactQ::from(n) * &s[n as usize];
        let next = ExactQ::from(n + 1) * &s[n as usize + 1];
        r.check(Cell::n(n), here, Relation::AtLeast, next);
    }
    Ok(r)
}

/// `Σ_{l=⌈n/2⌉}^{n-k-1} 1/(l²(n-l)²) ≤ 1/(n²k) + 2·ln(n/k)/n³` for `0 < k < n/2`.
///
/// The right side uses the lower end of the logarithm's enclosure.
pub fn verify_tail_sum_lemma(n: u32, k: u32) -> Result<BoundReport, Error> {
    if k == 0 || 2 * k >= n {
        return Err(Error::usage(format!("tail-sum bound needs 0 < k < n/2, got n = {n}, k = {k}")));
    }
    let log = interval::ln(&ExactQ::ratio(n as i64, k as i64), DEFAULT_DIGITS + 2)?;
    let mut r = BoundReport::new("tail_sum_lemma");
    r.check(Cell::nk(n, k), tail_lhs(n, k), Relation::AtMost, tail_rhs_lower(n, k, &log));
    Ok(r)
}

fn tail_lhs(n: u32, k: u32) -> ExactQ {
    let lo = n.div_ceil(2);
    let hi = n - k - 1;
    (lo..=hi).map(|l| ExactQ::new(1, Integer::from(l) * l * (n - l) * (n - l)).expect("l > 0")).sum()
}

fn tail_rhs_lower(n: u32, k: u32, log_nk: &Interval) -> ExactQ {
    let n = ExactQ::from(n);
    let first = (&n * &n * ExactQ::from(k)).recip().expect("positive");
    first + ExactQ::from_int(2) * &log_nk.lo / n.pow(3)
}

/// Every `3 ≤ n ≤ max_n` and `2 ≤ k < n/2`.
pub fn sweep_tail_sum_lemma(max_n: u32) -> Result<BoundReport, Error> {
    // ln(n/k) = ln n − ln k, from one enclosure per integer
    let places = DEFAULT_DIGITS + 4;
    let logs: Vec<Interval> = (0..=max_n)
        .into_par_iter()
        .map(|j| match j {
            0 => Interval::point(ExactQ::zero()),
            j => interval::ln(&ExactQ::from(j), places).expect("positive"),
        })
        .collect();
    let parts = (3..=max_n)
        .into_par_iter()
        .map(|n| {
            let mut r = BoundReport::new("tail_sum_lemma");
            // partial sums from l = ⌈n/2⌉ upward; k runs downward
            let lo = n.div_ceil(2);
            let mut lhs = ExactQ::zero();
            let mut next_l = lo;
            let ks: Vec<u32> = (2..n).filter(|k| 2 * k < n).collect();
            for &k in ks.iter().rev() {
                let hi = n - k - 1;
                while next_l <= hi {
                    let l = next_l;
                    lhs += ExactQ::new(1, Integer::from(l) * l * (n - l) * (n - l)).expect("l > 0");
                    next_l += 1;
                }
                let log = &logs[n as usize] - &logs[k as usize];
                r.check(Cell::nk(n, k), lhs.clone(), Relation::AtMost, tail_rhs_lower(n, k, &log));
            }
            r
        })
        .collect();
    let mut r = BoundReport::merge_all("tail_sum_lemma", parts);
    r.note("hypothesis read as 0 < k < n/2");
    Ok(r)
}

/// Exact values that the replayed induction step rests on.
#[derive(Clone, Debug, Serialize)]
pub struct CertificateTerms {
    /// `60·s₁₅(60)`
    pub scaled_s15_at_60: ExactQ,
    /// `(60·s₁₅(60))²`, the bound on `n²s₁₅(n)²`
    pub short_cycle_term: ExactQ,
    /// `(300/285)²·Σ_{m odd ≤ 15} Q(S_m)`
    pub near_term: ExactQ,
    /// upper end of `C₂·(2/15 + 4·ln(20)/300 + 300²/(15²·285²))`
    pub middle_term_upper: ExactQ,
    pub odd_q_sum: ExactQ,
    pub even_q_sum: ExactQ,
}

/// Recomputes the three intermediate bounds of the induction step for
/// `n > 300` and checks them against the displayed decimals, plus the
/// `n`-dependent facts at `n = n_probe` that let the `n = 300` numbers stand
/// in for every larger `n`.
pub fn replay_induction_certificate(
    engine: &Engine,
    n_probe: u32,
) -> Result<(BoundReport, CertificateTerms), Error> {
    if n_probe <= 300 {
        return Err(Error::OutOfRange { n: n_probe, min: 301, max: u32::MAX });
    }
    let mut r = BoundReport::new("induction_certificate");
    let c2 = c_two(engine)?;
    let s15 = stats::s_below_series(15, n_probe as usize).into_coefficients();
    let scaled60 = ExactQ::from(60u32) * &s15[60];
    let at = |label: &str| Cell::labeled(n_probe, Some(15), label);

    // first term
    let short = &scaled60 * &scaled60;
    r.check(at("60*s15(60) < 0.19076"), scaled60.clone(), Relation::Below, threshold("0.19076"));
    r.check(at("(60*s15(60))^2 <= 0.03639"), short.clone(), Relation::AtMost, threshold("0.03639"));
    let probe_scaled = ExactQ::from(n_probe) * &s15[n_probe as usize];
    r.check(at("n*s15(n) <= 60*s15(60) at n_probe"), probe_scaled, Relation::AtMost, scaled60.clone());

    // second term
    let odd = q_partial_sum(engine, true, 15)?;
    let even = q_partial_sum(engine, false, 15)?;
    let ratio = ExactQ::ratio(300, 285).pow(2);
    let near = &ratio * &odd;
    r.check(at("(300/285)^2 * odd Q sum <= 1.34393"), near.clone(), Relation::AtMost, threshold("1.34393"));
    r.check(at("even Q sum <= odd Q sum"), even.clone(), Relation::AtMost, odd.clone());
    let probe_ratio = ExactQ::ratio(n_probe as i64, (n_probe - 15) as i64).pow(2);
    r.check(at("(n/(n-15))^2 <= (300/285)^2 at n_probe"), probe_ratio, Relation::AtMost, ratio);

    // third term, logarithm rounded up
    let places = DEFAULT_DIGITS + 2;
    let ln20 = interval::ln(&ExactQ::from_int(20), places)?;
    let middle = ExactQ::ratio(2, 15)
        + ExactQ::from_int(4) * &ln20.hi / ExactQ::from_int(300)
        + ExactQ::new(300 * 300, 15 * 15 * 285 * 285)?;
    let middle = &c2 * &middle;
    r.check(at("C2*(2/15 + 4log(20)/300 + 300^2/(15^2*285^2)) <= 0.31681"), middle.clone(), Relation::AtMost, threshold("0.31681"));
    // log(n/15)/n at the probe must not exceed its value at n = 300
    let ln_probe = interval::ln(&ExactQ::ratio(n_probe as i64, 15), places)?;
    r.check(
        at("log(n/15)/n <= log(20)/300 at n_probe"),
        &ln_probe.hi / &ExactQ::from(n_probe),
        Relation::AtMost,
        &ln20.lo / &ExactQ::from_int(300),
    );

    // total
    let total = threshold("0.03639") + threshold("1.34393") + threshold("0.31681");
    r.check(at("0.03639 + 1.34393 + 0.31681 == 1.69713"), total.clone(), Relation::Equal, threshold("1.69713"));
    r.check(at("1.69713 < C2"), total.clone(), Relation::Below, c2.clone());

    // the bound itself at the probe, from the product formula
    let q_probe = stats::q_series(n_probe as usize).into_coefficients()[n_probe as usize].clone();
    r.check(at("n^2*Q(S_n) <= 1.69713 at n_probe"), sq(n_probe) * q_probe, Relation::AtMost, total);

    let terms = CertificateTerms {
        scaled_s15_at_60: scaled60,
        short_cycle_term: short,
        near_term: near,
        middle_term_upper: middle,
        odd_q_sum: odd,
        even_q_sum: even,
    };
    Ok((r, terms))
}

/// The exact constants quoted for the bound on `Q`, and `60·s₁₅(60)`.
pub fn verify_golden_values(engine: &Engine) -> Result<BoundReport, Error> {
    let mut r = BoundReport::new("golden_values");
    let even = q_partial_sum(engine, false, 15)?;
    let odd = q_partial_sum(engine, true, 15)?;
    let c2 = c_two(engine)?;
    let s60 = ExactQ::from(60u32) * engine.s_below(15, 60)?;
    let golden_s60 = ExactQ::new(
        "158929798034197186400893117108816122671".parse::<Integer>().expect("literal"),
        "83317523526667097802976844202788608000".parse::<Integer>().expect("literal"),
    )?;
    let c = |label: &str| Cell::labeled(15, None, label);
    r.check(c("sum_{m even <= 15} Q(S_m)"), even.clone(), Relation::Equal, ExactQ::ratio(630468719, 521756235));
    r.check(c("sum_{m even <= 15} Q(S_m) < 1.20836"), even, Relation::Below, threshold("1.20836"));
    r.check(c("sum_{m odd <= 15} Q(S_m)"), odd.clone(), Relation::Equal, ExactQ::ratio(4429844723, 3652293645));
    r.check(c("sum_{m odd <= 15} Q(S_m) < 1.21290"), odd, Relation::Below, threshold("1.21290"));
    r.check(Cell::labeled(4, None, "C2 = 16*Q(S_4)"), c2.clone(), Relation::Equal, ExactQ::ratio(16, 9));
    r.check(Cell::labeled(4, None, "C2 < 1.77778"), c2, Relation::Below, threshold("1.77778"));
    if !r.check(Cell::labeled(60, Some(15), "60*s15(60)"), s60.clone(), Relation::Equal, golden_s60.clone()) {
        r.note(format!(
            "60*s15(60) computes to {s60} ({}); the quoted rational {golden_s60} is {}",
            s60.to_significant(8),
            golden_s60.to_significant(8)
        ));
    }
    r.check(Cell::labeled(60, Some(15), "60*s15(60) < 0.19076"), s60, Relation::Below, threshold("0.19076"));
    Ok(r)
}

/// Every claim the verifier knows, by id.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Claim {
    GoldenValues,
    PropEvenUpper,
    PropEvenUpperConditioned,
    PropEvenLower,
    PropQUpper,
    PropQLower,
    KappaUniform,
    KappaEvenUniform,
    KappaOddUniform,
    QUniform,
    S15Monotone,
    TailSumLemma,
    InductionCertificate,
}

/// Ranges used when a claim is run by id.
#[derive(Clone, Debug)]
pub struct ClaimRanges {
    pub upper_max_n: u32,
    pub lower_max_n: u32,
    pub uniform_max_n: u32,
    pub s15_max_n: u32,
    pub tail_max_n: u32,
    pub n_probe: u32,
}

impl Default for ClaimRanges {
    fn default() -> Self {
        ClaimRanges {
            upper_max_n: 40,
            lower_max_n: 60,
            uniform_max_n: 300,
            s15_max_n: 300,
            tail_max_n: 400,
            n_probe: 301,
        }
    }
}

impl Claim {
    pub const ALL: [Claim; 13] = [
        Claim::GoldenValues,
        Claim::PropEvenUpper,
        Claim::PropEvenUpperConditioned,
        Claim::PropEvenLower,
        Claim::PropQUpper,
        Claim::PropQLower,
        Claim::KappaUniform,
        Claim::KappaEvenUniform,
        Claim::KappaOddUniform,
        Claim::QUniform,
        Claim::S15Monotone,
        Claim::TailSumLemma,
        Claim::InductionCertificate,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Claim::GoldenValues => "golden_values",
            Claim::PropEvenUpper => "prop_even_upper",
            Claim::PropEvenUpperConditioned => "prop_even_upper_even_conditioned",
            Claim::PropEvenLower => "prop_even_lower",
            Claim::PropQUpper => "prop_q_upper",
            Claim::PropQLower => "prop_q_lower",
            Claim::KappaUniform => "kappa_uniform_bound",
            Claim::KappaEvenUniform => "kappa_even_uniform_bound",
            Claim::KappaOddUniform => "kappa_odd_uniform_bound",
            Claim::QUniform => "q_uniform_bound",
            Claim::S15Monotone => "s15_monotone",
            Claim::TailSumLemma => "tail_sum_lemma",
            Claim::InductionCertificate => "induction_certificate",
        }
    }

    pub fn from_id(id: &str) -> Result<Claim, Error> {
        Claim::ALL
            .into_iter()
            .find(|c| c.id() == id)
            .ok_or_else(|| Error::usage(format!("unknown claim {id:?}")))
    }

    pub fn run(self, engine: &Engine, ranges: &ClaimRanges) -> Result<BoundReport, Error> {
        let lower = ranges.lower_max_n.min(ENUMERATION_LIMIT);
        match self {
            Claim::GoldenValues => verify_golden_values(engine),
            Claim::PropEvenUpper => sweep_prop_even_upper(engine, ranges.upper_max_n.min(ENUMERATION_LIMIT)),
            Claim::PropEvenUpperConditioned => sweep_prop_even_upper_conditioned(engine, lower),
            Claim::PropEvenLower => sweep_prop_even_lower(engine, lower),
            Claim::PropQUpper => sweep_prop_q(engine, lower, Direction::Upper),
            Claim::PropQLower => sweep_prop_q(engine, lower, Direction::Lower),
            Claim::KappaUniform => verify_kappa_uniform(engine, ranges.uniform_max_n),
            Claim::KappaEvenUniform => verify_kappa_even_uniform(engine, ranges.uniform_max_n),
            Claim::KappaOddUniform => verify_kappa_odd_uniform(engine, ranges.uniform_max_n),
            Claim::QUniform => verify_q_uniform(engine, ranges.uniform_max_n),
            Claim::S15Monotone => verify_s15_monotone(ranges.s15_max_n),
            Claim::TailSumLemma => sweep_tail_sum_lemma(ranges.tail_max_n),
            Claim::InductionCertificate => {
                replay_induction_certificate(engine, ranges.n_probe).map(|(r, _)| r)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine() -> &'static Engine {
        use std::sync::OnceLock;
        static E: OnceLock<Engine> = OnceLock::new();
        E.get_or_init(|| Engine::new(60))
    }

    #[test]
    fn single_cells_from_the_examples() {
        let e = engine();
        assert!(verify_prop_even_upper(e, 10, 6).unwrap().holds);
        assert!(verify_prop_even_upper(e, 4, 2).unwrap().holds);
        assert!(verify_prop_even_lower(e, 10, 6).unwrap().holds);
        assert!(verify_prop_even_lower(e, 9, 5).unwrap().holds);
        assert!(verify_prop_q(e, 12, 7, Direction::Lower).unwrap().holds);
        assert!(verify_prop_q(e, 12, 3, Direction::Upper).unwrap().holds);
    }

    #[test]
    fn literal_upper_bound_fails_at_n2_k2() {
        let r = verify_prop_even_upper(engine(), 2, 2).unwrap();
        assert!(!r.holds);
        let c = &r.counterexamples[0];
        assert_eq!(c.lhs, ExactQ::one());
        assert_eq!(c.rhs, ExactQ::ratio(1, 4));
        assert!(verify_prop_even_upper_conditioned(engine(), 2, 2).unwrap().holds);
    }

    #[test]
    fn range_errors() {
        let e = engine();
        assert!(verify_prop_even_lower(e, 10, 5).is_err());
        assert!(verify_prop_even_upper(e, 61, 5).is_err());
        assert!(verify_prop_even_upper(e, 10, 1).is_err());
        assert!(verify_prop_q(e, 12, 6, Direction::Lower).is_err());
        assert!(verify_tail_sum_lemma(30, 15).is_err());
        assert!(replay_induction_certificate(e, 300).is_err());
    }

    #[test]
    fn even_conditioned_short_cycles() {
        // even permutations of 4 points: identity, eight 3-cycles, three (2,2)
        assert_eq!(s_below_given_even(3, 4), ExactQ::ratio(4, 12));
        assert_eq!(s_below_given_even(2, 4), ExactQ::ratio(1, 12));
        assert_eq!(s_below_given_even(5, 4), ExactQ::one());
    }

    #[test]
    fn tail_lemma_cells() {
        assert!(verify_tail_sum_lemma(300, 15).unwrap().holds);
        let empty = verify_tail_sum_lemma(31, 15).unwrap();
        assert!(empty.holds);
        assert_eq!(empty.counterexamples.len(), 0);
        // the sweep agrees with the single-cell check
        let sweep = sweep_tail_sum_lemma(40).unwrap();
        let single = verify_tail_sum_lemma(37, 4).unwrap();
        assert!(sweep.range_checked.contains(&Cell::nk(37, 4)));
        assert!(sweep.holds && single.holds);
    }

    #[test]
    fn merge_is_order_independent() {
        let e = engine();
        let a = verify_prop_even_upper(e, 2, 2).unwrap();
        let b = verify_prop_even_upper(e, 10, 6).unwrap();
        let c = verify_prop_even_upper(e, 5, 3).unwrap();
        let ab = a.clone().merge(b.clone()).merge(c.clone());
        let ba = c.merge(b).merge(a);
        assert_eq!(ab, ba);
        assert!(!ab.holds);
        assert_eq!(ab.counterexamples.len(), 2);
    }

    #[test]
    fn report_invariants() {
        let r = sweep_prop_q(engine(), 20, Direction::Lower).unwrap();
        assert_eq!(r.holds, r.counterexamples.is_empty());
        assert!(!r.worst_margin.unwrap().is_negative());
    }

    #[test]
    fn claim_ids_round_trip() {
        for c in Claim::ALL {
            assert_eq!(Claim::from_id(c.id()).unwrap(), c);
        }
        assert!(Claim::from_id("nope").is_err());
    }
}

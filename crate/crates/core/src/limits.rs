//! Certified enclosures of the limits of `n²κ(A_n)` along even and odd `n`.
//!
//! The limits are built from four series over the leftover size `d`:
//!
//! ```text
//! A₁ = Σ_{d even} κ_O(S_d) + Σ_{d odd} κ_E(S_d)      B₁ = Σ_{d odd} Q(S_d)
//! A₂ = Σ_{d even} κ_E(S_d) + Σ_{d odd} κ_O(S_d)      B₂ = Σ_{d even} Q(S_d)
//! ```
//!
//! with `lim n²κ(A_n) = A₁ − 2B₁` over even `n` and `A₂ − 2B₂` over odd `n`.
//! In `A₁`, `A₂` the terms at `d ∈ {0, 1}` use [`Engine::even_weight`] and
//! [`Engine::odd_weight`].
//!
//! A partial sum up to `D` is a lower bound. The uniform bounds
//! `κ_E, κ_O ≤ 4C_κ/d²` and `Q ≤ (16/9)/d²` bound the tail by `C/D`, which
//! gives the upper end.

use serde::Serialize;

use crate::bounds::{c_kappa, c_two};
use crate::error::Error;
use crate::partition::Parity;
use crate::rational::ExactQ;
use crate::stats::Engine;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Enclosure {
    pub lo: ExactQ,
    pub hi: ExactQ,
    /// Largest `d` in the partial sum.
    pub terms_used: u32,
    /// `C` in the tail bound `C/D`.
    pub tail_constant: ExactQ,
}

impl Enclosure {
    pub fn width(&self) -> ExactQ {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> ExactQ {
        (&self.lo + &self.hi) / ExactQ::from_int(2)
    }

    pub fn contains(&self, v: &ExactQ) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn nested_in(&self, outer: &Enclosure) -> bool {
        outer.lo <= self.lo && self.hi <= outer.hi
    }

    fn from_partial(partial: ExactQ, d: u32, c: ExactQ) -> Enclosure {
        let hi = &partial + &(&c / &ExactQ::from(d));
        Enclosure { lo: partial, hi, terms_used: d, tail_constant: c }
    }
}

/// Exact partial sums of `A₁, A₂, B₁, B₂` over `d ≤ D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartialConstants {
    #[serde(rename = "D")]
    pub d: u32,
    pub a1: ExactQ,
    pub a2: ExactQ,
    pub b1: ExactQ,
    pub b2: ExactQ,
}

pub fn partial_constants(engine: &Engine, d_max: u32) -> Result<PartialConstants, Error> {
    if d_max > engine.order() {
        return Err(Error::usage(format!("D = {d_max} exceeds the truncation order {}", engine.order())));
    }
    let (mut a1, mut a2, mut b1, mut b2) = (ExactQ::zero(), ExactQ::zero(), ExactQ::zero(), ExactQ::zero());
    for d in 0..=d_max {
        let even = engine.even_weight(d)?;
        let odd = engine.odd_weight(d)?;
        let q = engine.q_split(d)?;
        if d % 2 == 0 {
            a1 += odd;
            a2 += even;
            b2 += q;
        } else {
            a1 += even;
            a2 += odd;
            b1 += q;
        }
    }
    Ok(PartialConstants { d: d_max, a1, a2, b1, b2 })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstantEnclosures {
    pub a1: Enclosure,
    pub a2: Enclosure,
    pub b1: Enclosure,
    pub b2: Enclosure,
}

pub fn enclose_constants(engine: &Engine, d_max: u32) -> Result<ConstantEnclosures, Error> {
    if d_max < 2 {
        return Err(Error::usage(format!("D must be at least 2, got {d_max}")));
    }
    let p = partial_constants(engine, d_max)?;
    let ca = c_kappa(engine)? * ExactQ::from_int(4);
    let cb = c_two(engine)?;
    Ok(ConstantEnclosures {
        a1: Enclosure::from_partial(p.a1, d_max, ca.clone()),
        a2: Enclosure::from_partial(p.a2, d_max, ca),
        b1: Enclosure::from_partial(p.b1, d_max, cb.clone()),
        b2: Enclosure::from_partial(p.b2, d_max, cb),
    })
}

/// The two limits of `n²κ(A_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitEnclosures {
    /// `A₁ − 2B₁`, the limit over even `n`
    pub even: Enclosure,
    /// `A₂ − 2B₂`, the limit over odd `n`
    pub odd: Enclosure,
}

impl LimitEnclosures {
    pub fn for_parity(&self, parity: Parity) -> &Enclosure {
        match parity {
            Parity::Even => &self.even,
            Parity::Odd => &self.odd,
        }
    }
}

pub fn limit_enclosures(engine: &Engine, d_max: u32) -> Result<LimitEnclosures, Error> {
    let c = enclose_constants(engine, d_max)?;
    let combine = |a: &Enclosure, b: &Enclosure| {
        let two = ExactQ::from_int(2);
        Enclosure {
            lo: &a.lo - &(&b.hi * &two),
            hi: &a.hi - &(&b.lo * &two),
            terms_used: d_max,
            tail_constant: &a.tail_constant + &(&b.tail_constant * &two),
        }
    };
    Ok(LimitEnclosures { even: combine(&c.a1, &c.b1), odd: combine(&c.a2, &c.b2) })
}

/// `δ(n) = (4C_κ + 2·16/9) / ⌈n/4⌉`, the finite-`n` allowance around a limit
/// enclosure. A coarse engineering bound, not a sharp one.
pub fn finite_n_allowance(engine: &Engine, n: u32) -> Result<ExactQ, Error> {
    if n == 0 {
        return Err(Error::usage("allowance needs n >= 1"));
    }
    let c = c_kappa(engine)? * ExactQ::from_int(4) + c_two(engine)? * ExactQ::from_int(2);
    Ok(c / ExactQ::from(n.div_ceil(4)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvergenceRow {
    pub n: u32,
    pub parity: Parity,
    pub value_n2_kappa_e: ExactQ,
    pub value_n2_q: ExactQ,
    pub value_n2_kappa_alt: ExactQ,
    /// `|n²κ(A_n) − midpoint|` for the limit enclosure of the same parity
    pub enclosure_mid_distance: ExactQ,
}

/// Rows for `from..=to` against the limit enclosures at `D = d_max`.
pub fn convergence_table(
    engine: &Engine,
    from: u32,
    to: u32,
    d_max: u32,
) -> Result<Vec<ConvergenceRow>, Error> {
    if from > to {
        return Err(Error::usage(format!("empty range {from}..={to}")));
    }
    if to > engine.order() {
        return Err(Error::OutOfRange { n: to, min: 0, max: engine.order() });
    }
    let limits = limit_enclosures(engine, d_max)?;
    let mids = [limits.even.midpoint(), limits.odd.midpoint()];
    (from..=to)
        .map(|n| {
            let parity = Parity::of(n as u64);
            let n2 = ExactQ::from(n).pow(2);
            let alt = &n2 * &engine.kappa_alt(n)?;
            let mid = &mids[(parity == Parity::Odd) as usize];
            Ok(ConvergenceRow {
                n,
                parity,
                value_n2_kappa_e: &n2 * &engine.kappa_even(n)?,
                value_n2_q: &n2 * &engine.q_split(n)?,
                enclosure_mid_distance: (&alt - mid).abs(),
                value_n2_kappa_alt: alt,
            })
        })
        .collect()
}

/// One line of the `limits` report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstantRow {
    pub constant: &'static str,
    #[serde(rename = "D")]
    pub d: u32,
    pub lo: ExactQ,
    pub hi: ExactQ,
    pub width: ExactQ,
    pub decimal_mid: String,
    /// significant digits in `decimal_mid`
    pub precision: u32,
}

/// The four series constants followed by the two limits, midpoints rendered
/// to `digits` significant digits.
pub fn limits_report(engine: &Engine, d_max: u32, digits: u32) -> Result<Vec<ConstantRow>, Error> {
    let c = enclose_constants(engine, d_max)?;
    let t = limit_enclosures(engine, d_max)?;
    let rows = [
        ("A1", c.a1),
        ("A2", c.a2),
        ("B1", c.b1),
        ("B2", c.b2),
        ("A1-2B1", t.even),
        ("A2-2B2", t.odd),
    ];
    Ok(rows
        .into_iter()
        .map(|(constant, e)| ConstantRow {
            constant,
            d: d_max,
            width: e.width(),
            decimal_mid: e.midpoint().to_significant(digits),
            precision: digits,
            lo: e.lo,
            hi: e.hi,
        })
        .collect())
}

//! Truncated formal power series over [`ExactQ`].
//!
//! A [`PowerSeries`] of order `N` stores the coefficients of `x^0..=x^N`
//! densely. Every operation discards terms of degree above `N`; two series
//! can only be combined when their orders agree.

use rayon::prelude::*;

use crate::error::Error;
use crate::rational::ExactQ;

/// Products at or above this order compute output coefficients in parallel.
/// Each coefficient is an exact sum, so the result does not depend on the
/// thread schedule.
const PAR_ORDER: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<ExactQ>,
}

impl PowerSeries {
    pub fn zero(order: usize) -> Self {
        PowerSeries { coeffs: vec![ExactQ::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = PowerSeries::zero(order);
        s.coeffs[0] = ExactQ::one();
        s
    }

    /// `c · x^degree`, or the zero series when `degree > order`.
    pub fn monomial(order: usize, degree: usize, c: ExactQ) -> Self {
        let mut s = PowerSeries::zero(order);
        if degree <= order {
            s.coeffs[degree] = c;
        }
        s
    }

    /// Builds a series from leading coefficients; missing ones are zero and
    /// coefficients past `order` are dropped.
    pub fn from_coeffs(order: usize, coeffs: impl IntoIterator<Item = ExactQ>) -> Self {
        let mut s = PowerSeries::zero(order);
        for (slot, c) in s.coeffs.iter_mut().zip(coeffs) {
            *slot = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[ExactQ] {
        &self.coeffs
    }

    pub fn into_coefficients(self) -> Vec<ExactQ> {
        self.coeffs
    }

    pub fn coefficient(&self, n: usize) -> Result<&ExactQ, Error> {
        self.coeffs.get(n).ok_or(Error::BeyondOrder { index: n, order: self.order() })
    }

    fn check_order(&self, other: &PowerSeries) -> Result<(), Error> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch { left: self.order(), right: other.order() });
        }
        Ok(())
    }

    pub fn add(&self, other: &PowerSeries) -> Result<PowerSeries, Error> {
        self.check_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(PowerSeries { coeffs })
    }

    pub fn scale(&self, c: &ExactQ) -> PowerSeries {
        PowerSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &PowerSeries) -> Result<PowerSeries, Error> {
        self.check_order(other)?;
        let order = self.order();
        // The sparser operand drives the inner loop.
        let (dense, sparse) = if self.nonzero_count() >= other.nonzero_count() {
            (self, other)
        } else {
            (other, self)
        };
        let terms: Vec<(usize, &ExactQ)> =
            sparse.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        let coeff = |n: usize| -> ExactQ {
            let mut acc = ExactQ::zero();
            for &(j, b) in &terms {
                if j > n {
                    break;
                }
                let a = &dense.coeffs[n - j];
                if !a.is_zero() {
                    acc += a * b;
                }
            }
            acc
        };
        let coeffs = if order >= PAR_ORDER {
            (0..=order).into_par_iter().map(coeff).collect()
        } else {
            (0..=order).map(coeff).collect()
        };
        Ok(PowerSeries { coeffs })
    }

    fn nonzero_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Truncated product of `(1 + w·x^d)` over the given `(d, w)` factors.
    /// Factors with `d > order` cannot reach the kept coefficients and are
    /// skipped; degree zero is rejected.
    pub fn product_sparse(order: usize, factors: &[(usize, ExactQ)]) -> Result<PowerSeries, Error> {
        let mut acc = PowerSeries::one(order);
        for (d, w) in factors {
            if *d == 0 {
                return Err(Error::usage("sparse factor degree must be positive"));
            }
            if *d > order || w.is_zero() {
                continue;
            }
            // In-place update from the top down so each old coefficient is
            // read before it is overwritten.
            for n in (*d..=order).rev() {
                if acc.coeffs[n - d].is_zero() {
                    continue;
                }
                let term = &acc.coeffs[n - d] * w;
                acc.coeffs[n] += term;
            }
        }
        Ok(acc)
    }

    /// Truncated product of arbitrary series of the same order, folded left
    /// to right.
    pub fn product<'a>(
        order: usize,
        factors: impl IntoIterator<Item = &'a PowerSeries>,
    ) -> Result<PowerSeries, Error> {
        factors.into_iter().try_fold(PowerSeries::one(order), |acc, f| acc.mul(f))
    }

    /// `exp(f)` for `f` with zero constant term, via `n·g_n = Σ_{k=1..n} k·f_k·g_{n-k}`.
    pub fn exp(&self) -> Result<PowerSeries, Error> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let order = self.order();
        let weighted: Vec<(usize, ExactQ)> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, c * &ExactQ::from(k as u32)))
            .collect();
        let mut g = Vec::with_capacity(order + 1);
        g.push(ExactQ::one());
        for n in 1..=order {
            let mut acc = ExactQ::zero();
            for (k, kf) in &weighted {
                if *k > n {
                    break;
                }
                acc += kf * &g[n - k];
            }
            g.push(acc / ExactQ::from(n as u32));
        }
        Ok(PowerSeries { coeffs: g })
    }
}

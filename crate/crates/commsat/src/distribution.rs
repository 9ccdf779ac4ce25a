//! Clause-type distribution `(p1, p2, p3)`.
//!
//! Every generated clause has `t` of its three literals agreeing with the
//! planted solution, where `t` is drawn from this distribution (`t = 0` is
//! excluded by construction). The expected fraction of agreeing literals is
//! `beta = (p1 + 2*p2 + 3*p3) / 3`, which ranges over `[1/3, 1]`.
//!
//! Because `beta` under-determines `(p1, p2)`, we pin the remaining degree of
//! freedom by taking the midpoint of the feasible segment
//! `{2*p1 + p2 = 3*(1 - beta), p1 >= 0, p2 >= 0, p1 + p2 <= 1}`. The
//! resulting map is continuous in `beta` and recovers the classic balanced
//! parameter pairs (e.g. `beta = 0.5` gives `(0.625, 0.25)`).

use crate::{Error, Result};
use rand::Rng;

/// Tolerance for probability bookkeeping noise (sums that should be 1).
const PROB_EPS: f64 = 1e-9;

/// Distribution of the number of planted-solution-agreeing literals per
/// clause. Stores `(p1, p2)`; `p3` is implied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClauseDistribution {
    p1: f64,
    p2: f64,
}

impl ClauseDistribution {
    /// Requires `p1, p2 >= 0` and `p1 + p2 <= 1` (up to rounding noise).
    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        let ok = p1.is_finite() && p2.is_finite() && p1 >= 0.0 && p2 >= 0.0;
        if !ok || p1 + p2 > 1.0 + PROB_EPS {
            return Err(Error::InvalidParameters(format!(
                "clause-type probabilities must satisfy p1, p2 >= 0 and p1 + p2 <= 1, \
                 got p1={p1}, p2={p2}"
            )));
        }
        Ok(ClauseDistribution { p1, p2 })
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn p3(&self) -> f64 {
        (1.0 - self.p1 - self.p2).max(0.0)
    }

    /// Expected fraction of literals agreeing with the planted solution.
    pub fn beta(&self) -> f64 {
        (self.p1 + 2.0 * self.p2 + 3.0 * self.p3()) / 3.0
    }

    /// Uniform over the seven sign patterns with at least one agreeing
    /// literal: `(3/7, 3/7, 1/7)`.
    pub fn one_hidden() -> Self {
        ClauseDistribution { p1: 3.0 / 7.0, p2: 3.0 / 7.0 }
    }

    /// Equal mass on one and two agreeing literals, none on three; the
    /// planted solution is maximally hidden from low-order statistics.
    pub fn two_hidden() -> Self {
        ClauseDistribution { p1: 0.5, p2: 0.5 }
    }

    /// Midpoint-rule inverse of [`beta`](Self::beta); requires
    /// `beta` in `[1/3, 1]`.
    ///
    /// With `d = 3*(1 - beta)`, the feasible `(p1, p2)` pairs form the
    /// segment `2*p1 + p2 = d`. Its endpoints are `(d/2, 0)` and `(0, d)`
    /// when `d <= 1`, else `(d/2, 0)` and `(d - 1, 2 - d)`; we return the
    /// midpoint.
    pub fn from_beta(beta: f64) -> Result<Self> {
        if !beta.is_finite() || !(1.0 / 3.0 - PROB_EPS..=1.0 + PROB_EPS).contains(&beta) {
            return Err(Error::InvalidParameters(format!(
                "beta must lie in [1/3, 1], got {beta}"
            )));
        }
        let d = 3.0 * (1.0 - beta);
        let (p1, p2) = if d <= 1.0 {
            (d / 4.0, d / 2.0)
        } else {
            ((3.0 * d - 2.0) / 4.0, (2.0 - d) / 2.0)
        };
        ClauseDistribution::new(p1.clamp(0.0, 1.0), p2.clamp(0.0, 1.0))
    }

    /// The q-deceptive family: each literal agrees with the planted solution
    /// with odds `q : 1`, conditioned on at least one agreeing. `q = 1`
    /// reduces to [`one_hidden`](Self::one_hidden); larger `q` raises `beta`.
    pub fn from_q(q: f64) -> Result<Self> {
        if !q.is_finite() || q <= 0.0 {
            return Err(Error::InvalidParameters(format!("q must be positive, got {q}")));
        }
        let denom = (1.0 + q).powi(3) - 1.0;
        ClauseDistribution::new(3.0 * q / denom, 3.0 * q * q / denom)
    }

    /// Clause type for a uniform draw `u` in `[0, 1)`: thresholds at `p1`
    /// and `p1 + p2`.
    pub fn type_for_unit(&self, u: f64) -> usize {
        if u < self.p1 {
            1
        } else if u < self.p1 + self.p2 {
            2
        } else {
            3
        }
    }

    /// Draws a clause type in `{1, 2, 3}`.
    pub fn sample_type<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.type_for_unit(rng.random())
    }
}

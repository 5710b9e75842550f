//! Deterministic scalar numerics: adaptive quadrature on finite and
//! improper intervals, bracketed root finding, bounded scalar
//! minimization and finite-difference derivative checks.
//!
//! Every routine here is a pure function of its inputs.

mod diff;
mod minimize;
mod quadrature;
mod roots;

pub use diff::{central_difference, derivative_check};
pub use minimize::{minimize_scalar, minimize_with_tails, Minimum, MinimumSource, TailLimits};
pub use quadrature::integrate;
pub use roots::{expand_bracket, find_root};

use serde::Serialize;
use thiserror::Error;

/// Failures of the scalar numerics layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error(
        "quadrature did not converge within {evaluations} evaluations \
         (partial estimate {value}, error estimate {error_estimate:e})"
    )]
    QuadratureNotConverged {
        value: f64,
        error_estimate: f64,
        evaluations: usize,
    },
    #[error("integrand returned NaN at x = {at}")]
    NanIntegrand { at: f64 },
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    #[error("root finder did not converge; last bracket [{lo}, {hi}]")]
    RootNotConverged { lo: f64, hi: f64 },
    #[error("could not bracket a root starting from {start} (last probe {last})")]
    BracketNotFound { start: f64, last: f64 },
    #[error("objective returned NaN at x = {at}")]
    NanObjective { at: f64 },
    #[error("unbounded search domain [{lo}, {hi}] needs a finite window and tail limits")]
    UnboundedSearch { lo: f64, hi: f64 },
}

/// A real interval whose endpoints may be infinite.
///
/// Infinite endpoints are carried as IEEE infinities and queried through
/// [`Interval::lo_is_infinite`] / [`Interval::hi_is_infinite`]; a large
/// finite number is never used as a stand-in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, NumericsError> {
        if lo.is_nan() || hi.is_nan() || lo >= hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY
        {
            return Err(NumericsError::InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn real_line() -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn lower_half_line(hi: f64) -> Result<Self, NumericsError> {
        Self::new(f64::NEG_INFINITY, hi)
    }

    pub fn upper_half_line(lo: f64) -> Result<Self, NumericsError> {
        Self::new(lo, f64::INFINITY)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn lo_is_infinite(&self) -> bool {
        self.lo.is_infinite()
    }

    pub fn hi_is_infinite(&self) -> bool {
        self.hi.is_infinite()
    }

    pub fn is_bounded(&self) -> bool {
        !self.lo_is_infinite() && !self.hi_is_infinite()
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

/// Value returned by [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumericResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Tolerances shared by every numeric routine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ToleranceConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evals: usize,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_evals: 1_000_000,
        }
    }
}

impl ToleranceConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_evals: usize) -> Option<Self> {
        (abs_tol > 0.0 && rel_tol > 0.0 && max_evals > 0).then_some(Self {
            abs_tol,
            rel_tol,
            max_evals,
        })
    }

    /// Convergence target for a quantity of magnitude `value`.
    pub fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

use thiserror::Error;

use crate::needle::MinimizerReport;
use crate::numerics::NumericsError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("theta = {0} lies outside the open interval (0, 1)")]
    ThetaOutOfRange(f64),
    #[error(
        "search window [{window_lo}, {window_hi}] exhausted: window minimum {window_min} at its \
         edge, tail limits {lower_tail:?} / {upper_tail:?}"
    )]
    SearchExhausted {
        window_lo: f64,
        window_hi: f64,
        window_min: f64,
        lower_tail: Option<f64>,
        upper_tail: Option<f64>,
    },
    #[error("measure is not log-concave: psi'' = {second_derivative} at x = {at}")]
    NotLogConcave { at: f64, second_derivative: f64 },
    #[error("set reduction exceeded {limit} steps")]
    StepLimit {
        limit: usize,
        trajectory: Box<Vec<MinimizerReport>>,
    },
    #[error("grid tail mass {tail_mass:e} exceeds 1e-8 of the total; need half-width >= {required_half_width}")]
    TailTooHeavy {
        tail_mass: f64,
        required_half_width: f64,
    },
    #[error("mesh under-resolved for eps = {eps}: need n_t >= {required_n_t} and n_fiber >= {required_n_fiber}")]
    UnderResolved {
        eps: f64,
        required_n_t: usize,
        required_n_fiber: usize,
    },
    #[error("eigen solver did not converge (residual {residual:e})")]
    EigenNotConverged { residual: f64 },
    #[error("test function has zero variance")]
    ZeroVariance,
    #[error("line {line}: {message}")]
    Table { line: usize, message: String },
}

//! Model isoperimetric profiles of weighted lines under curvature-dimension
//! bounds `Ric_N >= K` with `N = inf` or `N < 0`, together with the
//! one-dimensional machinery used to analyse their equality cases:
//! half-line reduction, interval shifting, rigidity detection, spectral
//! gaps of the weighted Laplacian and a small warped-product laboratory.

// Negated float comparisons are used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certify;
mod error;
pub mod needle;
pub mod numerics;
mod params;
mod solve;
pub mod profiles;
pub mod spectral;
pub mod warped;

pub use error::{Error, Result};
pub use numerics::{Interval, NumericResult, NumericsError, ToleranceConfig};
pub use params::{Diameter, Dimension, ModelParams};

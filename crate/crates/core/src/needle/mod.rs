//! Isoperimetry on a weighted line `(R, |.|, e^{-psi} dx)`: measures and
//! boundary measures of interval unions, the half-line profile, the
//! interval-shifting reduction, an exhaustive grid oracle, curvature
//! checks and detection of the rigid model densities.

mod brute;
mod convexity;
mod halfline;
mod line;
mod rigidity;
mod sets;
mod shift;
mod table;

pub use brute::{brute_force_minimizer, MAX_GRID};
pub use convexity::{convexity_check, convexity_with_tol, ConvexityReport};
pub use halfline::{halfline_profile, halfline_value};
pub use line::{cosh_model_potential, Potential, Term, WeightedLine, TAIL_MASS};
pub use rigidity::{rigidity_detect, rigidity_with_tol, RigidityFit, RigidityReport};
pub use sets::{Component, IntervalUnion};
pub use shift::{
    left_shift, reduce_to_halfline, reduce_with_limit, right_shift, ShiftOutcome,
    DEFAULT_STEP_LIMIT,
};
pub use table::{parse_table, MonotoneCubic};

use serde::Serialize;

/// A set together with its mass, boundary measure and the half-line
/// profile value at that mass.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimizerReport {
    pub set: IntervalUnion,
    pub mass: f64,
    pub boundary: f64,
    pub profile_value: f64,
    pub is_halfline: bool,
}

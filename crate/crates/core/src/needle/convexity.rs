use serde::Serialize;

use super::line::WeightedLine;
use crate::Dimension;

/// Outcome of a curvature-dimension check on a sample grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub holds: bool,
    /// Minimum over the grid of `psi'' - K` (`N = inf`) or
    /// `psi'' - psi'^2 / (N - 1) - K` (`N < 0`).
    pub margin: f64,
    /// Grid point attaining the margin.
    pub at: f64,
}

pub const CONVEXITY_SAMPLES: usize = 2001;
pub const CONVEXITY_TOL: f64 = 1e-6;

/// `K`-convexity (`N = inf`) or `(K, N-1)`-convexity (`N < 0`) of the
/// potential, sampled on the line's support.
pub fn convexity_check(line: &WeightedLine, k: f64, n: Dimension) -> ConvexityReport {
    convexity_with_tol(line, k, n, CONVEXITY_TOL)
}

pub fn convexity_with_tol(line: &WeightedLine, k: f64, n: Dimension, tol: f64) -> ConvexityReport {
    let s = line.support();
    let m = CONVEXITY_SAMPLES;
    let mut margin = f64::INFINITY;
    let mut at = s.lo();
    for i in 0..m {
        // Stay off the endpoints of bounded domains, where one-sided
        // behaviour is not part of the condition.
        let x = s.lo() + s.width() * (i as f64 + 0.5) / m as f64;
        let (_, d1, d2) = line.potential().derivatives(x);
        let value = match n {
            Dimension::Infinite => d2 - k,
            Dimension::Negative(n) => d2 - d1 * d1 / (n - 1.0) - k,
        };
        if value < margin || value.is_nan() {
            margin = value;
            at = x;
        }
    }
    ConvexityReport {
        holds: margin >= -tol,
        margin,
        at,
    }
}

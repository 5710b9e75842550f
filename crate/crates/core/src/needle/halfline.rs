use super::convexity::{convexity_with_tol, ConvexityReport};
use super::line::WeightedLine;
use super::sets::IntervalUnion;
use super::MinimizerReport;
use crate::{Dimension, Error, Result};

fn ensure_log_concave(line: &WeightedLine) -> Result<()> {
    let ConvexityReport { holds, margin, at } =
        convexity_with_tol(line, 0.0, Dimension::Infinite, 1e-9);
    if holds {
        Ok(())
    } else {
        Err(Error::NotLogConcave {
            at,
            second_derivative: margin,
        })
    }
}

/// Smaller boundary of the two half-lines of mass `theta`, without the
/// log-concavity check.
pub(crate) fn halfline_candidates(line: &WeightedLine, theta: f64) -> Result<(f64, f64, f64, f64)> {
    let a = line.lower_quantile(theta)?;
    let b = line.upper_quantile(theta)?;
    Ok((a, line.density(a), b, line.density(b)))
}

pub fn halfline_value(line: &WeightedLine, theta: f64) -> Result<f64> {
    let (_, left, _, right) = halfline_candidates(line, theta)?;
    Ok(left.min(right))
}

/// Best half-line of mass `theta`; for log-concave measures this is the
/// isoperimetric profile.
pub fn halfline_profile(line: &WeightedLine, theta: f64) -> Result<MinimizerReport> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::ThetaOutOfRange(theta));
    }
    ensure_log_concave(line)?;
    let (a, left, b, right) = halfline_candidates(line, theta)?;
    let d = line.domain();
    let set = if left <= right {
        IntervalUnion::new(&[(d.lo(), a)])?
    } else {
        IntervalUnion::new(&[(b, d.hi())])?
    };
    let boundary = left.min(right);
    Ok(MinimizerReport {
        mass: line.measure(&set)?,
        boundary,
        profile_value: boundary,
        is_halfline: true,
        set,
    })
}

use serde::Serialize;

use super::line::WeightedLine;
use crate::{Dimension, Error, Result};

pub const RIGIDITY_SAMPLES: usize = 1001;
pub const RIGIDITY_TOL: f64 = 1e-9;

/// Parameters of the model density recovered from a potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum RigidityFit {
    /// `e^{-psi} = (k cosh(gamma + sqrt(sigma) x))^{N-1}`, from
    /// `f_N = e^{psi/(1-N)} = a cosh(sqrt(sigma) x) + b sinh(sqrt(sigma) x)`.
    Cosh { a: f64, b: f64, k: f64, gamma: f64 },
    /// `psi'' = K` with centre `shift`.
    Gaussian { shift: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RigidityReport {
    pub matches_model: bool,
    pub fit: Option<RigidityFit>,
    pub residual: f64,
    pub diagnostic: Option<String>,
}

pub fn rigidity_detect(line: &WeightedLine, k: f64, n: Dimension) -> Result<RigidityReport> {
    rigidity_with_tol(line, k, n, RIGIDITY_TOL)
}

fn sample_points(line: &WeightedLine) -> impl Iterator<Item = f64> + '_ {
    let s = line.support();
    (0..RIGIDITY_SAMPLES).map(move |i| s.lo() + s.width() * i as f64 / (RIGIDITY_SAMPLES - 1) as f64)
}

/// Tests whether the raw potential belongs to the equality family.
///
/// Negative `N`: residual is `sup |f_N / (a cosh + b sinh) - 1|` on the
/// support. `N = inf`: residual is `sup |psi'' - K| / K`.
pub fn rigidity_with_tol(line: &WeightedLine, k: f64, n: Dimension, tol: f64) -> Result<RigidityReport> {
    if !(k > 0.0) {
        return Err(Error::Parameter(format!("curvature K must be positive, got {k}")));
    }
    let pot = line.potential();
    match n {
        Dimension::Infinite => {
            let residual = sample_points(line)
                .map(|x| (pot.derivatives(x).2 - k).abs() / k)
                .fold(0.0, f64::max);
            let shift = -pot.derivatives(0.0).1 / k;
            Ok(RigidityReport {
                matches_model: residual <= tol,
                fit: Some(RigidityFit::Gaussian { shift }),
                residual,
                diagnostic: None,
            })
        }
        Dimension::Negative(n) => {
            if !(n < -1.0) {
                return Err(Error::Parameter(format!(
                    "rigidity is characterized only for N < -1, got {n}"
                )));
            }
            let s = (k / (1.0 - n)).sqrt();
            let f = |x: f64| (pot.value(x) / (1.0 - n)).exp();
            let (psi0, dpsi0, _) = pot.derivatives(0.0);
            let a = (psi0 / (1.0 - n)).exp();
            let b = a * dpsi0 / (1.0 - n) / s;
            if !(a > 0.0) || (b / a).abs() >= 1.0 {
                return Ok(RigidityReport {
                    matches_model: false,
                    fit: None,
                    residual: f64::INFINITY,
                    diagnostic: Some(format!(
                        "|b/a| = {} >= 1: no normalizable model density fits",
                        (b / a).abs()
                    )),
                });
            }
            let residual = sample_points(line)
                .map(|x| (f(x) / (a * (s * x).cosh() + b * (s * x).sinh()) - 1.0).abs())
                .fold(0.0, f64::max);
            let gamma = (b / a).atanh();
            Ok(RigidityReport {
                matches_model: residual <= tol,
                fit: Some(RigidityFit::Cosh {
                    a,
                    b,
                    k: a / gamma.cosh(),
                    gamma,
                }),
                residual,
                diagnostic: None,
            })
        }
    }
}

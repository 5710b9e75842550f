use serde::Serialize;

use super::special::ln_cosh_plus_beta_sinh;
use super::{check_theta, model_tolerance};
use crate::numerics::{integrate, Interval};
use crate::{solve, Dimension, Error, ModelParams, Result};

/// Parameters of a needle density `J_H`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NeedleDensityParams {
    params: ModelParams,
    h: f64,
}

impl NeedleDensityParams {
    /// For negative `N` the slope must satisfy `|H / ((N-1) sqrt(sigma))| < 1`.
    pub fn new(params: ModelParams, h: f64) -> Result<Self> {
        if !h.is_finite() {
            return Err(Error::Parameter(format!("H must be finite, got {h}")));
        }
        let ndp = Self { params, h };
        if let Some(beta) = ndp.beta() {
            if beta.abs() >= 1.0 {
                return Err(Error::Parameter(format!(
                    "|H / ((N-1) sqrt(sigma))| = {} >= 1: J_H is not integrable",
                    beta.abs()
                )));
            }
        }
        Ok(ndp)
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// `H / ((N-1) sqrt(sigma))` for negative `N`.
    pub fn beta(&self) -> Option<f64> {
        let n = self.params.n_value()?;
        let s = self.params.sigma()?.sqrt();
        Some(self.h / ((n - 1.0) * s))
    }

    pub fn ln_density(&self, t: f64) -> f64 {
        match self.params.dimension() {
            Dimension::Infinite => self.h * t - 0.5 * self.params.k() * t * t,
            Dimension::Negative(n) => {
                let s = self.params.sigma().expect("negative dimension").sqrt();
                let beta = self.beta().expect("negative dimension");
                (n - 1.0) * ln_cosh_plus_beta_sinh(s * t, beta)
            }
        }
    }
}

/// `J_H(t)`.
pub fn needle_density(ndp: &NeedleDensityParams, t: f64) -> f64 {
    ndp.ln_density(t).exp()
}

/// Solution of the balance equation together with the half-line masses of
/// `J_{H_theta}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedPoint {
    pub h_theta: f64,
    /// `int_0^inf J`.
    pub upper_mass: f64,
    /// `int_{-inf}^0 J`.
    pub lower_mass: f64,
}

/// `H_theta`.
pub fn fixed_point_h(params: &ModelParams, theta: f64) -> Result<f64> {
    Ok(fixed_point(params, theta)?.h_theta)
}

/// Solves `theta int_0^inf J_H = (1 - theta) int_{-inf}^0 J_H` for `H`.
pub fn fixed_point(params: &ModelParams, theta: f64) -> Result<FixedPoint> {
    check_theta(theta)?;
    let tol = model_tolerance();
    let masses = |ndp: &NeedleDensityParams, shift: f64| -> Result<(f64, f64)> {
        let j = |t: f64| (ndp.ln_density(t) - shift).exp();
        let upper = integrate(j, Interval::upper_half_line(0.0)?, &tol)?.value;
        let lower = integrate(j, Interval::lower_half_line(0.0)?, &tol)?.value;
        Ok((upper, lower))
    };
    let balance = |upper: f64, lower: f64| theta * upper - (1.0 - theta) * lower;

    let h_theta = match params.dimension() {
        Dimension::Infinite => {
            let k = params.k();
            // Dividing by the peak value exp(H^2 / 2K) keeps the masses O(1).
            solve::root_from(
                |h| {
                    let ndp = NeedleDensityParams::new(*params, h)?;
                    let (u, l) = masses(&ndp, 0.5 * h * h / k)?;
                    Ok(balance(u, l))
                },
                0.0,
                k.sqrt(),
                Interval::real_line(),
                &tol,
            )?
        }
        Dimension::Negative(n) => {
            let scale = (n - 1.0) * params.sigma().expect("negative dimension").sqrt();
            let beta = solve::root_from(
                |beta| {
                    let ndp = NeedleDensityParams::new(*params, beta * scale)?;
                    let (u, l) = masses(&ndp, 0.0)?;
                    Ok(balance(u, l))
                },
                0.0,
                0.5,
                Interval::new(-1.0 + 1e-12, 1.0 - 1e-12)?,
                &tol,
            )
            .map_err(|e| match e {
                Error::Numerics(_) => Error::Parameter(format!(
                    "no balancing slope with |beta| < 1 for theta = {theta}: {e}"
                )),
                other => other,
            })?;
            beta * scale
        }
    };
    let ndp = NeedleDensityParams::new(*params, h_theta)?;
    let (upper_mass, lower_mass) = masses(&ndp, 0.0)?;
    Ok(FixedPoint {
        h_theta,
        upper_mass,
        lower_mass,
    })
}

use std::f64::consts::PI;

use serde::Serialize;

use super::window::Window;
use super::{check_theta, model_tolerance};
use crate::numerics::{integrate, Interval, ToleranceConfig};
use crate::{solve, Error, Result};

/// `sqrt(K / 2 pi) exp(-K s^2 / 2)`.
pub fn gaussian_density(k: f64, s: f64) -> Result<f64> {
    Ok(GaussianModel::new(k)?.density(s))
}

/// `I_(K,inf,inf)(theta)`.
pub fn profile_gauss_inf(k: f64, theta: f64) -> Result<f64> {
    GaussianModel::new(k)?.profile(theta)
}

/// `I_(K,inf,D)(theta)` and the minimizing window offset `xi`.
pub fn profile_gauss_d(k: f64, d: f64, theta: f64) -> Result<(f64, f64)> {
    let p = GaussianModel::new(k)?.profile_diameter(d, theta)?;
    Ok((p.value, p.xi_star))
}

/// Finite-diameter Gaussian profile value with its minimizing window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianDiameterProfile {
    pub value: f64,
    pub xi_star: f64,
}

/// The Gaussian model space `(R, |.|, N(0, 1/K))`.
#[derive(Debug, Clone, Copy)]
pub struct GaussianModel {
    k: f64,
    tol: ToleranceConfig,
}

impl GaussianModel {
    pub fn new(k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::Parameter(format!("curvature K must be positive, got {k}")));
        }
        Ok(Self {
            k,
            tol: model_tolerance(),
        })
    }

    pub fn with_tolerance(mut self, tol: ToleranceConfig) -> Self {
        self.tol = tol;
        self
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn density(&self, s: f64) -> f64 {
        (self.k / (2.0 * PI)).sqrt() * (-0.5 * self.k * s * s).exp()
    }

    /// Distribution function, computed as `1/2 +- int_0^|a|` of the density.
    pub fn cdf(&self, a: f64) -> Result<f64> {
        if a == 0.0 {
            return Ok(0.5);
        }
        if a.is_infinite() {
            return Ok(if a > 0.0 { 1.0 } else { 0.0 });
        }
        let half = integrate(|s| self.density(s), Interval::new(0.0, a.abs())?, &self.tol)?.value;
        Ok(0.5 + half.copysign(a))
    }

    /// `a(theta)`: the point with `cdf(a) = theta`.
    pub fn quantile(&self, theta: f64) -> Result<f64> {
        check_theta(theta)?;
        solve::root_from(
            |a| Ok(self.cdf(a)? - theta),
            0.0,
            1.0 / self.k.sqrt(),
            Interval::real_line(),
            &self.tol,
        )
    }

    pub fn profile(&self, theta: f64) -> Result<f64> {
        Ok(self.density(self.quantile(theta)?))
    }

    /// `-K a(theta)`.
    pub fn profile_derivative(&self, theta: f64) -> Result<f64> {
        Ok(-self.k * self.quantile(theta)?)
    }

    /// `f_{xi,D}(theta)`; `theta` may be 0 or 1.
    pub fn window_value(&self, xi: f64, d: f64, theta: f64) -> Result<f64> {
        Ok(self.window(xi, d).point(theta, &self.tol)?.ratio)
    }

    /// The window quantile `b(theta)` in `[xi, xi + D]`.
    pub fn window_quantile(&self, xi: f64, d: f64, theta: f64) -> Result<f64> {
        Ok(self.window(xi, d).point(theta, &self.tol)?.d)
    }

    fn window(&self, xi: f64, d: f64) -> Window<impl Fn(f64) -> f64> {
        let k = self.k;
        let peak = 0.0f64.clamp(xi, xi + d);
        Window {
            ln_phi: move |s: f64| -0.5 * k * s * s,
            lo: xi,
            hi: xi + d,
            ln_ref: -0.5 * k * peak * peak,
            log_scale: false,
        }
    }

    pub fn profile_diameter(&self, d: f64, theta: f64) -> Result<GaussianDiameterProfile> {
        check_theta(theta)?;
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::Parameter(format!("diameter must be positive and finite, got {d}")));
        }
        let (xi_star, value) = solve::minimize(
            |xi| self.window_value(xi, d, theta),
            Interval::new(-d, 0.0)?,
            &self.tol,
        )?;
        Ok(GaussianDiameterProfile { value, xi_star })
    }
}

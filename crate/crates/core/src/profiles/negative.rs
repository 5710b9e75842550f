use serde::Serialize;

use super::special::{ln_cosh, ln_sinh};
use super::window::Window;
use super::{check_theta, model_tolerance, ProfileBranch};
use crate::numerics::{integrate, Interval, Minimum, MinimumSource, TailLimits, ToleranceConfig};
use crate::{solve, Error, ModelParams, Result};

/// `m_{K,N} = int_R cosh^{N-1}(sqrt(sigma) x) dx`.
pub fn model_mass_neg(params: &ModelParams) -> Result<f64> {
    Ok(CoshModel::new(params)?.mass())
}

/// `I_(K,N,inf)(theta)`.
pub fn profile_neg_inf(params: &ModelParams, theta: f64) -> Result<f64> {
    CoshModel::new(params)?.profile(theta)
}

/// `I_(K,N,D)(theta)` with the active branch and its window offset.
pub fn profile_neg_d(params: &ModelParams, d: f64, theta: f64) -> Result<NegDiameterProfile> {
    CoshModel::new(params)?.profile_diameter(d, theta)
}

/// Finite-diameter profile for negative `N`: the minimum of the three
/// model branches, each kept for inspection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NegDiameterProfile {
    pub value: f64,
    pub branch: ProfileBranch,
    /// Window offset of the winning branch; `None` for `K3`, infinite when
    /// a tail limit wins.
    pub xi_star: Option<f64>,
    pub k1: Minimum,
    pub k2: Minimum,
    pub k3: f64,
}

/// The cosh model line `(R, |.|, m_{K,N}^{-1} cosh^{N-1}(sqrt(sigma) x) dx)`
/// for `K > 0`, `N < 0`, with the finite-diameter windows built on the
/// same `sigma`.
#[derive(Debug, Clone, Copy)]
pub struct CoshModel {
    k: f64,
    n: f64,
    sqrt_sigma: f64,
    mass: f64,
    tol: ToleranceConfig,
}

impl CoshModel {
    pub fn new(params: &ModelParams) -> Result<Self> {
        let n = params.n_value().ok_or_else(|| {
            Error::Parameter("the cosh model needs a negative effective dimension".into())
        })?;
        Self::from_kn(params.k(), n)
    }

    pub fn from_kn(k: f64, n: f64) -> Result<Self> {
        let params = ModelParams::negative(k, n)?;
        let sqrt_sigma = params.sigma().expect("negative dimension").sqrt();
        let tol = model_tolerance();
        let e = n - 1.0;
        let half = integrate(
            |x| (e * ln_cosh(sqrt_sigma * x)).exp(),
            Interval::upper_half_line(0.0)?,
            &tol,
        )?
        .value;
        Ok(Self {
            k,
            n,
            sqrt_sigma,
            mass: 2.0 * half,
            tol,
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn sigma(&self) -> f64 {
        self.sqrt_sigma * self.sqrt_sigma
    }

    pub fn sqrt_sigma(&self) -> f64 {
        self.sqrt_sigma
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn tolerance(&self) -> &ToleranceConfig {
        &self.tol
    }

    /// Decay rate `(1 - N) sqrt(sigma)` of the exponential model.
    pub fn kappa(&self) -> f64 {
        (1.0 - self.n) * self.sqrt_sigma
    }

    /// `ln cosh^{N-1}(sqrt(sigma) s)`, unnormalized.
    pub fn ln_cosh_weight(&self, s: f64) -> f64 {
        (self.n - 1.0) * ln_cosh(self.sqrt_sigma * s)
    }

    /// `ln sinh^{N-1}(sqrt(sigma) s)` for `s > 0`.
    pub fn ln_sinh_weight(&self, s: f64) -> f64 {
        (self.n - 1.0) * ln_sinh(self.sqrt_sigma * s)
    }

    /// Normalized density.
    pub fn density(&self, s: f64) -> f64 {
        self.ln_cosh_weight(s).exp() / self.mass
    }

    pub fn cdf(&self, c: f64) -> Result<f64> {
        if c == 0.0 {
            return Ok(0.5);
        }
        if c.is_infinite() {
            return Ok(if c > 0.0 { 1.0 } else { 0.0 });
        }
        let half = integrate(
            |s| self.ln_cosh_weight(s).exp(),
            Interval::new(0.0, c.abs())?,
            &self.tol,
        )?
        .value
            / self.mass;
        Ok(0.5 + half.copysign(c))
    }

    /// `c(theta)`.
    pub fn quantile(&self, theta: f64) -> Result<f64> {
        check_theta(theta)?;
        solve::root_from(
            |c| Ok(self.cdf(c)? - theta),
            0.0,
            1.0 / self.sqrt_sigma,
            Interval::real_line(),
            &self.tol,
        )
    }

    pub fn profile(&self, theta: f64) -> Result<f64> {
        Ok(self.density(self.quantile(theta)?))
    }

    /// `(N - 1) sqrt(sigma) tanh(sqrt(sigma) c(theta))`.
    pub fn profile_derivative(&self, theta: f64) -> Result<f64> {
        let c = self.quantile(theta)?;
        Ok((self.n - 1.0) * self.sqrt_sigma * (self.sqrt_sigma * c).tanh())
    }

    fn check_diameter(d: f64) -> Result<()> {
        if d > 0.0 && d.is_finite() {
            Ok(())
        } else {
            Err(Error::Parameter(format!("diameter must be positive and finite, got {d}")))
        }
    }

    /// Exponential-model quantile `d_3(theta)`, in closed form.
    pub fn d3(&self, d: f64, theta: f64) -> f64 {
        let kappa = self.kappa();
        let q = -(-kappa * d).exp_m1();
        -(-theta * q).ln_1p() / kappa
    }

    /// `K_{3,D}(theta)` for `theta` in `[0, 1]`, in closed form.
    pub fn k3(&self, d: f64, theta: f64) -> f64 {
        let kappa = self.kappa();
        let q = -(-kappa * d).exp_m1();
        kappa * (1.0 - theta * q) / q
    }

    pub(crate) fn cosh_window(&self, xi: f64, d: f64) -> Window<impl Fn(f64) -> f64 + '_> {
        let peak = 0.0f64.clamp(xi, xi + d);
        Window {
            ln_phi: move |s| self.ln_cosh_weight(s),
            lo: xi,
            hi: xi + d,
            ln_ref: self.ln_cosh_weight(peak),
            log_scale: false,
        }
    }

    pub(crate) fn sinh_window(&self, xi: f64, d: f64) -> Window<impl Fn(f64) -> f64 + '_> {
        Window {
            ln_phi: move |s| self.ln_sinh_weight(s),
            lo: xi,
            hi: xi + d,
            ln_ref: self.ln_sinh_weight(xi),
            log_scale: true,
        }
    }

    /// `d_{1,xi}(theta)`.
    pub fn d1(&self, xi: f64, d: f64, theta: f64) -> Result<f64> {
        Self::check_diameter(d)?;
        Ok(self.cosh_window(xi, d).point(theta, &self.tol)?.d)
    }

    /// The `K_1` ratio at a fixed window offset; `theta` may be 0 or 1.
    pub fn k1_at(&self, xi: f64, d: f64, theta: f64) -> Result<f64> {
        Self::check_diameter(d)?;
        Ok(self.cosh_window(xi, d).point(theta, &self.tol)?.ratio)
    }

    /// `d_{2,xi}(theta)` for `xi > 0`.
    pub fn d2(&self, xi: f64, d: f64, theta: f64) -> Result<f64> {
        Self::check_diameter(d)?;
        Self::check_positive_offset(xi)?;
        Ok(self.sinh_window(xi, d).point(theta, &self.tol)?.d)
    }

    /// The `K_2` ratio at a fixed window offset `xi > 0`.
    pub fn k2_at(&self, xi: f64, d: f64, theta: f64) -> Result<f64> {
        Self::check_diameter(d)?;
        Self::check_positive_offset(xi)?;
        Ok(self.sinh_window(xi, d).point(theta, &self.tol)?.ratio)
    }

    fn check_positive_offset(xi: f64) -> Result<()> {
        if xi > 0.0 && xi.is_finite() {
            Ok(())
        } else {
            Err(Error::Parameter(format!("sinh window needs xi > 0, got {xi}")))
        }
    }

    /// Half-width `Xi = 10 / sqrt(sigma) + D` of the finite offset search.
    pub fn search_half_width(&self, d: f64) -> f64 {
        10.0 / self.sqrt_sigma + d
    }

    /// `K_{1,D}(theta)`: minimum over `xi` in `[-Xi, Xi]` compared with the
    /// exponential limits as `xi -> -inf` / `+inf`.
    pub fn k1(&self, d: f64, theta: f64) -> Result<Minimum> {
        check_theta(theta)?;
        Self::check_diameter(d)?;
        let xi_max = self.search_half_width(d);
        let window = Interval::new(-xi_max, xi_max)?;
        let tails = TailLimits {
            lower: Some(self.k3(d, 1.0 - theta)),
            upper: Some(self.k3(d, theta)),
        };
        let m = solve::minimize_tails(|xi| self.k1_at(xi, d, theta), window, tails, &self.tol)?;
        check_edges(&m, window, tails, true, &self.tol)?;
        Ok(m)
    }

    /// `K_{2,D}(theta)`: minimum over `xi` in `[1e-6 / sqrt(sigma), Xi]`
    /// compared with the exponential limit as `xi -> inf`.
    pub fn k2(&self, d: f64, theta: f64) -> Result<Minimum> {
        check_theta(theta)?;
        Self::check_diameter(d)?;
        let window = Interval::new(1e-6 / self.sqrt_sigma, self.search_half_width(d))?;
        let tails = TailLimits {
            lower: None,
            upper: Some(self.k3(d, theta)),
        };
        let m = solve::minimize_tails(|xi| self.k2_at(xi, d, theta), window, tails, &self.tol)?;
        check_edges(&m, window, tails, false, &self.tol)?;
        Ok(m)
    }

    pub fn profile_diameter(&self, d: f64, theta: f64) -> Result<NegDiameterProfile> {
        let k1 = self.k1(d, theta)?;
        let k2 = self.k2(d, theta)?;
        let k3 = self.k3(d, theta);
        let (value, branch, xi_star) = [
            (k1.value, ProfileBranch::K1, Some(k1.x)),
            (k2.value, ProfileBranch::K2, Some(k2.x)),
            (k3, ProfileBranch::K3, None),
        ]
        .into_iter()
        .fold((f64::INFINITY, ProfileBranch::K3, None), |best, cand| {
            if cand.0 < best.0 {
                cand
            } else {
                best
            }
        });
        Ok(NegDiameterProfile {
            value,
            branch,
            xi_star,
            k1,
            k2,
            k3,
        })
    }
}

/// A window minimum sitting on a finite search edge while still below the
/// limit on that side means the search window was too small.
fn check_edges(
    m: &Minimum,
    window: Interval,
    tails: TailLimits,
    lower_edge_is_tail: bool,
    tol: &ToleranceConfig,
) -> Result<()> {
    if m.source != MinimumSource::Window {
        return Ok(());
    }
    let near = |edge: f64| (m.window_x - edge).abs() <= 1e-6 * (1.0 + edge.abs());
    let below = |limit: Option<f64>| limit.is_none_or(|l| m.window_value < l - tol.target(l));
    let at_lower = near(window.lo()) && (!lower_edge_is_tail || below(tails.lower));
    let at_upper = near(window.hi()) && below(tails.upper);
    if at_lower || at_upper {
        return Err(Error::SearchExhausted {
            window_lo: window.lo(),
            window_hi: window.hi(),
            window_min: m.window_value,
            lower_tail: tails.lower,
            upper_tail: tails.upper,
        });
    }
    Ok(())
}

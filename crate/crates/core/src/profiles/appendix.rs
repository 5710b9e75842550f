use serde::Serialize;

use super::negative::CoshModel;
use crate::{Error, ModelParams, Result};

/// Auxiliary functions used to certify that each finite-diameter branch
/// strictly dominates `I_(K,N,inf)`, for one `(K, N, D)`.
#[derive(Debug, Clone, Copy)]
pub struct AppendixGaps {
    model: CoshModel,
    d: f64,
}

/// Snapshot of the gap functions at a fixed `(theta, xi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapRecord {
    pub theta: f64,
    pub xi: f64,
    pub h3: f64,
    pub h1: f64,
    pub h2: Option<f64>,
    pub m0: f64,
    pub m1: f64,
    pub d2: Option<f64>,
    pub d_bar: Option<f64>,
}

pub fn appendix_gap_functions(params: &ModelParams, d: f64) -> Result<AppendixGaps> {
    AppendixGaps::new(params, d)
}

impl AppendixGaps {
    pub fn new(params: &ModelParams, d: f64) -> Result<Self> {
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::Parameter(format!("diameter must be positive and finite, got {d}")));
        }
        Ok(Self {
            model: CoshModel::new(params)?,
            d,
        })
    }

    pub fn model(&self) -> &CoshModel {
        &self.model
    }

    pub fn diameter(&self) -> f64 {
        self.d
    }

    /// `I_(K,N,inf)` extended by 0 at `theta = 0, 1`.
    fn profile_closed(&self, theta: f64) -> Result<f64> {
        if theta <= 0.0 || theta >= 1.0 {
            Ok(0.0)
        } else {
            self.model.profile(theta)
        }
    }

    /// `K_{3,D}(theta) - I(theta)`; at `theta = 1` the closed-form limit.
    pub fn h3(&self, theta: f64) -> Result<f64> {
        Ok(self.model.k3(self.d, theta) - self.profile_closed(theta)?)
    }

    /// `h3(1) = K_{3,D}(1)`, the lower bound of `h3` on `(0, 1]`.
    pub fn h3_floor(&self) -> f64 {
        self.model.k3(self.d, 1.0)
    }

    /// `K_1` ratio at `xi` minus `I(theta)`, with `theta` in `[0, 1]`.
    pub fn h1(&self, xi: f64, theta: f64) -> Result<f64> {
        Ok(self.model.k1_at(xi, self.d, theta)? - self.profile_closed(theta)?)
    }

    /// `K_2` ratio at `xi > 0` minus `I(theta)`, with `theta` in `[0, 1]`.
    pub fn h2(&self, xi: f64, theta: f64) -> Result<f64> {
        Ok(self.model.k2_at(xi, self.d, theta)? - self.profile_closed(theta)?)
    }

    /// `int_xi^{xi+D} cosh^{N-1} / cosh^{N-1}(sqrt(sigma) xi)`.
    pub fn m0(&self, xi: f64) -> Result<f64> {
        let tol = *self.model.tolerance();
        self.model.cosh_window(xi, self.d).mass_over_density(xi, &tol)
    }

    /// `int_xi^{xi+D} cosh^{N-1} / cosh^{N-1}(sqrt(sigma)(xi + D))`.
    pub fn m1(&self, xi: f64) -> Result<f64> {
        let tol = *self.model.tolerance();
        self.model
            .cosh_window(xi, self.d)
            .mass_over_density(xi + self.d, &tol)
    }

    /// `int_xi^{xi+D} sinh^{N-1} / sinh^{N-1}(sqrt(sigma)(xi + D))` for `xi > 0`.
    pub fn m_sinh(&self, xi: f64) -> Result<f64> {
        if !(xi > 0.0) {
            return Err(Error::Parameter(format!("sinh window needs xi > 0, got {xi}")));
        }
        let tol = *self.model.tolerance();
        self.model
            .sinh_window(xi, self.d)
            .mass_over_density(xi + self.d, &tol)
    }

    /// `lim m0(xi)` as `xi -> -inf`:
    /// `-((c_D - s_D)^{N-1} - 1) / ((N-1) sqrt(sigma))`.
    pub fn m0_lower_limit(&self) -> f64 {
        let (e, s) = self.exponents();
        // c_D - s_D = exp(-sqrt(sigma) D); the exponential avoids cancellation.
        -((-(s * self.d) * e).exp() - 1.0) / (e * s)
    }

    /// `lim m1(xi)` as `xi -> inf`: `(1 - (c_D + s_D)^{1-N}) / ((N-1) sqrt(sigma))`.
    pub fn m1_upper_limit(&self) -> f64 {
        let (e, s) = self.exponents();
        (1.0 - ((s * self.d) * -e).exp()) / (e * s)
    }

    fn exponents(&self) -> (f64, f64) {
        (self.model.n() - 1.0, self.model.sqrt_sigma())
    }

    /// `d_{2,xi}(theta)`.
    pub fn d2(&self, xi: f64, theta: f64) -> Result<f64> {
        self.model.d2(xi, self.d, theta)
    }

    /// `(theta (xi+D)^N + (1-theta) xi^N)^{1/N}`, an upper bound for
    /// `d_{2,xi}(theta)`.
    pub fn d_bar(&self, xi: f64, theta: f64) -> f64 {
        let n = self.model.n();
        (theta * (xi + self.d).powf(n) + (1.0 - theta) * xi.powf(n)).powf(1.0 / n)
    }

    pub fn record(&self, theta: f64, xi: f64) -> Result<GapRecord> {
        let positive = xi > 0.0;
        Ok(GapRecord {
            theta,
            xi,
            h3: self.h3(theta)?,
            h1: self.h1(xi, theta)?,
            h2: if positive { Some(self.h2(xi, theta)?) } else { None },
            m0: self.m0(xi)?,
            m1: self.m1(xi)?,
            d2: if positive { Some(self.d2(xi, theta)?) } else { None },
            d_bar: positive.then(|| self.d_bar(xi, theta)),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaps() -> AppendixGaps {
        AppendixGaps::new(&ModelParams::negative(1.0, -2.0).unwrap(), 1.0).unwrap()
    }

    #[test]
    fn limits_match_the_hyperbolic_forms() {
        let g = gaps();
        let (e, s) = (-3.0, 1.0 / 3f64.sqrt());
        let (c, sh) = (s.cosh(), s.sinh());
        let m0 = -1.0 / (e * s) * ((c - sh).powf(e) - 1.0);
        let m1 = (1.0 - (c + sh).powf(-e)) / (e * s);
        assert!((g.m0_lower_limit() - m0).abs() < 1e-12 * m0.abs());
        assert!((g.m1_upper_limit() - m1).abs() < 1e-12 * m1.abs());
    }

    #[test]
    fn m_values_approach_their_limits() {
        let g = gaps();
        assert!((g.m0(-60.0).unwrap() - g.m0_lower_limit()).abs() < 1e-9);
        assert!((g.m1(60.0).unwrap() - g.m1_upper_limit()).abs() < 1e-9);
    }

    #[test]
    fn h3_floor_is_h3_at_one() {
        let g = gaps();
        assert_eq!(g.h3(1.0).unwrap(), g.h3_floor());
        assert!((g.h3_floor() - 0.372_305_204_107_893_4).abs() < 1e-12);
    }
}

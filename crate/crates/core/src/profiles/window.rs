use crate::numerics::{integrate, Interval, ToleranceConfig};
use crate::{solve, Result};

/// A density `phi = exp(ln_phi)` restricted to `[lo, hi]`.
///
/// Integrals are taken against `exp(ln_phi - ln_ref)` so that densities
/// spanning many orders of magnitude stay representable. With `log_scale`
/// the integration variable is `v = ln(s / lo)` (requires `lo > 0`), which
/// tames densities that blow up at the left end.
pub(crate) struct Window<F> {
    pub ln_phi: F,
    pub lo: f64,
    pub hi: f64,
    pub ln_ref: f64,
    pub log_scale: bool,
}

/// Quantile `d` of the normalized window density at level `theta` and the
/// ratio `phi(d) / int_lo^hi phi`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct WindowPoint {
    pub d: f64,
    pub ratio: f64,
}

impl<F: Fn(f64) -> f64> Window<F> {
    fn v_range(&self) -> (f64, f64) {
        if self.log_scale {
            (0.0, (self.hi / self.lo).ln())
        } else {
            (self.lo, self.hi)
        }
    }

    fn s_of(&self, v: f64) -> f64 {
        if self.log_scale {
            self.lo * v.exp()
        } else {
            v
        }
    }

    fn weight(&self, v: f64) -> f64 {
        if self.log_scale {
            ((self.ln_phi)(self.lo * v.exp()) + v - self.ln_ref).exp()
        } else {
            ((self.ln_phi)(v) - self.ln_ref).exp()
        }
    }

    fn mass(&self, v0: f64, v1: f64, tol: &ToleranceConfig) -> Result<f64> {
        if v1 <= v0 {
            return Ok(0.0);
        }
        Ok(integrate(|v| self.weight(v), Interval::new(v0, v1)?, tol)?.value)
    }

    /// Mass of the window in units of `exp(ln_ref)` (times `lo` when
    /// log-scaled).
    fn total(&self, tol: &ToleranceConfig) -> Result<f64> {
        let (v0, v1) = self.v_range();
        self.mass(v0, v1, tol)
    }

    /// `int_lo^hi phi(s) ds / phi(at)`.
    pub fn mass_over_density(&self, at: f64, tol: &ToleranceConfig) -> Result<f64> {
        let z = self.total(tol)?;
        let scale = if self.log_scale { self.lo } else { 1.0 };
        Ok(z * scale / ((self.ln_phi)(at) - self.ln_ref).exp())
    }

    /// Evaluates the quantile and density ratio; `theta` may be 0 or 1.
    pub fn point(&self, theta: f64, tol: &ToleranceConfig) -> Result<WindowPoint> {
        let z = self.total(tol)?;
        let (v0, v1) = self.v_range();
        let v = if theta <= 0.0 {
            v0
        } else if theta >= 1.0 {
            v1
        } else {
            let target = theta * z;
            solve::root(|v| Ok(self.mass(v0, v, tol)? - target), Interval::new(v0, v1)?, tol)?
        };
        let d = self.s_of(v).clamp(self.lo, self.hi);
        let scale = if self.log_scale { self.lo } else { 1.0 };
        let ratio = ((self.ln_phi)(d) - self.ln_ref).exp() / (z * scale);
        Ok(WindowPoint { d, ratio })
    }
}

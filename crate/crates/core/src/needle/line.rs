use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::sets::{Component, IntervalUnion};
use super::table::{parse_table, MonotoneCubic};
use crate::numerics::{integrate, Interval, ToleranceConfig};
use crate::profiles::special::ln_cosh;
use crate::{solve, Error, Result};

/// One additive piece of a potential.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Term {
    /// `sum_i c_i x^i`.
    Polynomial(Vec<f64>),
    /// `amplitude * sin(frequency * x + phase)`.
    Sine {
        amplitude: f64,
        frequency: f64,
        phase: f64,
    },
    /// `amplitude * ln cosh(rate * x + shift)`.
    LogCosh {
        amplitude: f64,
        rate: f64,
        shift: f64,
    },
}

impl Term {
    fn eval(&self, x: f64) -> (f64, f64, f64) {
        match self {
            Term::Polynomial(c) => {
                let (mut v, mut d, mut dd) = (0.0, 0.0, 0.0);
                for &ci in c.iter().rev() {
                    dd = dd * x + 2.0 * d;
                    d = d * x + v;
                    v = v * x + ci;
                }
                (v, d, dd)
            }
            Term::Sine {
                amplitude,
                frequency,
                phase,
            } => {
                let u = frequency * x + phase;
                (
                    amplitude * u.sin(),
                    amplitude * frequency * u.cos(),
                    -amplitude * frequency * frequency * u.sin(),
                )
            }
            Term::LogCosh {
                amplitude,
                rate,
                shift,
            } => {
                let u = rate * x + shift;
                let th = u.tanh();
                (
                    amplitude * ln_cosh(u),
                    amplitude * rate * th,
                    amplitude * rate * rate * (1.0 - th * th),
                )
            }
        }
    }
}

type Closure = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// The potential `psi` of a weighted line `e^{-psi} dx`.
#[derive(Clone)]
pub enum Potential {
    /// Sum of analytic terms with exact derivatives.
    Terms(Vec<Term>),
    /// Tabulated values joined by a monotone cubic.
    Table(MonotoneCubic),
    /// Arbitrary function; derivatives by finite differences.
    Custom(Closure),
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Potential::Terms(t) => f.debug_tuple("Terms").field(t).finish(),
            Potential::Table(t) => f.debug_tuple("Table").field(t).finish(),
            Potential::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl Potential {
    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Potential::Custom(Arc::new(f))
    }

    pub fn value(&self, x: f64) -> f64 {
        match self {
            Potential::Terms(terms) => terms.iter().map(|t| t.eval(x).0).sum(),
            Potential::Table(c) => c.eval(x).0,
            Potential::Custom(f) => f(x),
        }
    }

    /// `(psi, psi', psi'')` at `x`.
    pub fn derivatives(&self, x: f64) -> (f64, f64, f64) {
        match self {
            Potential::Terms(terms) => terms.iter().fold((0.0, 0.0, 0.0), |acc, t| {
                let (v, d, dd) = t.eval(x);
                (acc.0 + v, acc.1 + d, acc.2 + dd)
            }),
            Potential::Table(c) => c.eval(x),
            Potential::Custom(f) => {
                let h = 1e-5 * (1.0 + x.abs());
                let (fm, f0, fp) = (f(x - h), f(x), f(x + h));
                (f0, (fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h))
            }
        }
    }
}

/// Mass left in each truncated tail when placing grids on unbounded lines.
pub const TAIL_MASS: f64 = 1e-12;

/// A weighted line `(I, |.|, e^{-psi} dx / Z)` on an interval `I`.
#[derive(Debug, Clone)]
pub struct WeightedLine {
    potential: Potential,
    domain: Interval,
    psi_ref: f64,
    ln_z: f64,
    support: Interval,
    tol: ToleranceConfig,
}

impl WeightedLine {
    pub fn new(potential: Potential, domain: Interval) -> Result<Self> {
        let tol = ToleranceConfig {
            abs_tol: 1e-14,
            rel_tol: 1e-12,
            max_evals: 200_000,
        };
        let lo = domain.lo().max(-20.0);
        let hi = domain.hi().min(20.0).max(lo + 1e-3);
        let psi_ref = (0..=400)
            .map(|i| potential.value(lo + (hi - lo) * i as f64 / 400.0))
            .fold(f64::INFINITY, f64::min);
        if !psi_ref.is_finite() {
            return Err(Error::Parameter("potential is not finite on the domain".into()));
        }
        let z = integrate(|x| (psi_ref - potential.value(x)).exp(), domain, &tol)
            .map_err(|e| Error::Parameter(format!("e^(-psi) is not integrable: {e}")))?
            .value;
        if !(z > 0.0 && z.is_finite()) {
            return Err(Error::Parameter("e^(-psi) has no finite positive mass".into()));
        }
        let mut line = Self {
            potential,
            domain,
            psi_ref,
            ln_z: z.ln(),
            support: domain,
            tol,
        };
        let s_lo = if domain.lo_is_infinite() {
            line.lower_quantile(TAIL_MASS)?
        } else {
            domain.lo()
        };
        let s_hi = if domain.hi_is_infinite() {
            line.upper_quantile(TAIL_MASS)?
        } else {
            domain.hi()
        };
        line.support = Interval::new(s_lo, s_hi)?;
        Ok(line)
    }

    /// `psi = K x^2 / 2` on `R`.
    pub fn gaussian(k: f64) -> Result<Self> {
        check_k(k)?;
        Self::new(
            Potential::Terms(vec![Term::Polynomial(vec![0.0, 0.0, 0.5 * k])]),
            Interval::real_line(),
        )
    }

    /// `e^{-psi} = (scale cosh(gamma + sqrt(sigma) x))^{N-1}` on `R`.
    pub fn cosh_model(k: f64, n: f64, gamma: f64, scale: f64) -> Result<Self> {
        Self::new(cosh_model_potential(k, n, gamma, scale)?, Interval::real_line())
    }

    /// `e^{-psi} = e^{(N-1) sqrt(sigma) x}` on `[0, D]`.
    pub fn exp_model(k: f64, n: f64, d: f64) -> Result<Self> {
        check_k(k)?;
        if !(n < 0.0) || !(d > 0.0 && d.is_finite()) {
            return Err(Error::Parameter("exponential model needs N < 0 and finite D > 0".into()));
        }
        let kappa = (1.0 - n) * (k / (1.0 - n)).sqrt();
        Self::new(
            Potential::Terms(vec![Term::Polynomial(vec![0.0, kappa])]),
            Interval::new(0.0, d)?,
        )
    }

    /// Tabulated potential; the domain is the table's range.
    pub fn from_table(text: &str) -> Result<Self> {
        let table = parse_table(text)?;
        let domain = Interval::new(table.x_min(), table.x_max())?;
        Self::new(Potential::Table(table), domain)
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// Domain truncated to leave mass `TAIL_MASS` in each infinite tail.
    pub fn support(&self) -> Interval {
        self.support
    }

    /// `ln Z` with `Z = int e^{-psi}`.
    pub fn log_normalization(&self) -> f64 {
        self.ln_z - self.psi_ref
    }

    pub fn tolerance(&self) -> &ToleranceConfig {
        &self.tol
    }

    /// Normalized density at `x` (zero outside the domain).
    pub fn density(&self, x: f64) -> f64 {
        if !self.domain.contains(x) {
            return 0.0;
        }
        (self.psi_ref - self.potential.value(x) - self.ln_z).exp()
    }

    /// Mass of `[a, b]` clipped to the domain.
    pub fn mass_between(&self, a: f64, b: f64) -> Result<f64> {
        let lo = a.max(self.domain.lo());
        let hi = b.min(self.domain.hi());
        if hi <= lo {
            return Ok(0.0);
        }
        let r = integrate(|x| self.density(x), Interval::new(lo, hi)?, &self.tol)?;
        Ok(r.value.clamp(0.0, 1.0))
    }

    /// `m((-inf, x])`.
    pub fn lower_mass(&self, x: f64) -> Result<f64> {
        self.mass_between(f64::NEG_INFINITY, x)
    }

    /// `m([x, inf))`.
    pub fn upper_mass(&self, x: f64) -> Result<f64> {
        self.mass_between(x, f64::INFINITY)
    }

    fn quantile_by(&self, f: impl Fn(f64) -> Result<f64>, q: f64) -> Result<f64> {
        let d = self.domain;
        let start = if d.is_bounded() {
            0.5 * (d.lo() + d.hi())
        } else if d.lo_is_infinite() && d.hi_is_infinite() {
            0.0
        } else if d.lo_is_infinite() {
            d.hi() - 1.0
        } else {
            d.lo() + 1.0
        };
        let step = if d.is_bounded() { 0.25 * d.width() } else { 1.0 };
        solve::root_from(|x| Ok(f(x)? - q), start, step, d, &self.tol)
    }

    /// The point `a` with `m((-inf, a]) = q`.
    pub fn lower_quantile(&self, q: f64) -> Result<f64> {
        check_level(q)?;
        self.quantile_by(|x| self.lower_mass(x), q)
    }

    /// The point `b` with `m([b, inf)) = q`.
    pub fn upper_quantile(&self, q: f64) -> Result<f64> {
        check_level(q)?;
        self.quantile_by(|x| Ok(-self.upper_mass(x)?), -q)
    }

    fn clip(&self, c: &Component) -> Option<(f64, f64)> {
        let lo = c.lo.max(self.domain.lo());
        let hi = c.hi.min(self.domain.hi());
        (hi > lo).then_some((lo, hi))
    }

    /// Normalized mass of a set (components clipped to the domain).
    pub fn measure(&self, set: &IntervalUnion) -> Result<f64> {
        let mut total = 0.0;
        for c in set.components() {
            if let Some((lo, hi)) = self.clip(c) {
                total += self.mass_between(lo, hi)?;
            }
        }
        Ok(total.min(1.0))
    }

    /// Sum of the density over the set's endpoints lying strictly inside
    /// the domain.
    pub fn boundary_measure(&self, set: &IntervalUnion) -> f64 {
        set.boundary_points()
            .into_iter()
            .filter(|&x| x > self.domain.lo() && x < self.domain.hi())
            .map(|x| self.density(x))
            .sum()
    }

    /// A single interval reaching exactly one end of the domain.
    pub fn is_halfline(&self, set: &IntervalUnion) -> bool {
        match set.components() {
            [c] => (c.lo <= self.domain.lo()) != (c.hi >= self.domain.hi()),
            _ => false,
        }
    }

    /// True when the density is even, checked on a sample grid.
    pub fn is_symmetric(&self) -> bool {
        let d = self.domain;
        if d.lo() != -d.hi() {
            return false;
        }
        let r = self.support.hi().min(-self.support.lo());
        (1..=200).all(|i| {
            let x = r * i as f64 / 200.0;
            let (p, q) = (self.density(x), self.density(-x));
            (p - q).abs() <= 1e-9 * p.max(q).max(f64::MIN_POSITIVE)
        })
    }
}

fn check_level(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::ThetaOutOfRange(q))
    }
}

fn check_k(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("curvature K must be positive, got {k}")))
    }
}

/// `psi = (1 - N)(ln scale + ln cosh(gamma + sqrt(sigma) x))`.
pub fn cosh_model_potential(k: f64, n: f64, gamma: f64, scale: f64) -> Result<Potential> {
    check_k(k)?;
    if !(n < 0.0) || !(scale > 0.0) {
        return Err(Error::Parameter("cosh model needs N < 0 and a positive scale".into()));
    }
    let rate = (k / (1.0 - n)).sqrt();
    Ok(Potential::Terms(vec![
        Term::LogCosh {
            amplitude: 1.0 - n,
            rate,
            shift: gamma,
        },
        Term::Polynomial(vec![(1.0 - n) * scale.ln()]),
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_derivatives() {
        let t = Term::Polynomial(vec![1.0, -2.0, 0.5, 0.25]);
        let (v, d, dd) = t.eval(2.0);
        assert_eq!(v, 1.0 - 4.0 + 2.0 + 2.0);
        assert_eq!(d, -2.0 + 2.0 + 3.0);
        assert_eq!(dd, 1.0 + 3.0);
    }

    #[test]
    fn normalization_and_halves() {
        let g = WeightedLine::gaussian(2.0).unwrap();
        assert!((g.measure(&IntervalUnion::whole_line()).unwrap() - 1.0).abs() < 1e-12);
        assert!((g.lower_mass(0.0).unwrap() - 0.5).abs() < 1e-13);
        assert!((g.density(0.0) - (1.0 / std::f64::consts::PI).sqrt()).abs() < 1e-13);
        assert!(g.support().lo() < -4.0 && g.support().hi() > 4.0);
        assert!(g.is_symmetric());
    }

    #[test]
    fn bounded_exponential_model() {
        let e = WeightedLine::exp_model(1.0, -2.0, 1.0).unwrap();
        assert!((e.measure(&IntervalUnion::whole_line()).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(e.density(-0.1), 0.0);
        assert!(!e.is_symmetric());
    }

    #[test]
    fn quantiles_invert_masses() {
        let c = WeightedLine::cosh_model(1.0, -2.0, 0.3, 1.0).unwrap();
        let a = c.lower_quantile(0.3).unwrap();
        assert!((c.lower_mass(a).unwrap() - 0.3).abs() < 1e-12);
        let b = c.upper_quantile(0.3).unwrap();
        assert!((c.upper_mass(b).unwrap() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn custom_potential_finite_differences() {
        let p = Potential::custom(|x| x.powi(4));
        let (_, d, dd) = p.derivatives(1.0);
        assert!((d - 4.0).abs() < 1e-8);
        assert!((dd - 12.0).abs() < 1e-4);
    }
}

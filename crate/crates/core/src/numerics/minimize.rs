use serde::Serialize;

use super::{Interval, NumericsError, ToleranceConfig};

const PRESCAN_POINTS: usize = 64;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Where a reported minimum came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MinimumSource {
    /// Attained at a point of the (finite) search window.
    Window,
    /// The limit of `f` as `x -> -inf` is lower than anything in the window.
    LowerTail,
    /// The limit of `f` as `x -> +inf` is lower than anything in the window.
    UpperTail,
}

/// Result of a scalar minimization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Minimum {
    /// Minimizer; `-inf` / `+inf` when a tail limit wins.
    pub x: f64,
    pub value: f64,
    pub source: MinimumSource,
    /// Best value found inside the finite window, regardless of `source`.
    pub window_x: f64,
    pub window_value: f64,
}

/// Limits of the objective at the ends of an unbounded domain.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct TailLimits {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

/// Minimizes `f` over a bounded `domain`: a deterministic 64-point scan
/// picks the basin, golden-section refines it.
///
/// Returns `(x*, f(x*))`. Unbounded domains are refused; see
/// [`minimize_with_tails`].
pub fn minimize_scalar<F: Fn(f64) -> f64>(
    f: F,
    domain: Interval,
    tol: &ToleranceConfig,
) -> Result<(f64, f64), NumericsError> {
    if !domain.is_bounded() {
        return Err(NumericsError::UnboundedSearch {
            lo: domain.lo(),
            hi: domain.hi(),
        });
    }
    scan_and_refine(&f, domain.lo(), domain.hi(), tol)
}

/// Minimizes over a finite `window` and compares the result against the
/// supplied tail limits; the smaller one is reported with its provenance.
pub fn minimize_with_tails<F: Fn(f64) -> f64>(
    f: F,
    window: Interval,
    tails: TailLimits,
    tol: &ToleranceConfig,
) -> Result<Minimum, NumericsError> {
    let (wx, wv) = minimize_scalar(f, window, tol)?;
    let mut best = Minimum {
        x: wx,
        value: wv,
        source: MinimumSource::Window,
        window_x: wx,
        window_value: wv,
    };
    if let Some(lower) = tails.lower {
        if lower < best.value {
            best.x = f64::NEG_INFINITY;
            best.value = lower;
            best.source = MinimumSource::LowerTail;
        }
    }
    if let Some(upper) = tails.upper {
        if upper < best.value {
            best.x = f64::INFINITY;
            best.value = upper;
            best.source = MinimumSource::UpperTail;
        }
    }
    Ok(best)
}

fn eval<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64, NumericsError> {
    let y = f(x);
    if y.is_nan() {
        Err(NumericsError::NanObjective { at: x })
    } else {
        Ok(y)
    }
}

fn scan_and_refine<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    tol: &ToleranceConfig,
) -> Result<(f64, f64), NumericsError> {
    let n = PRESCAN_POINTS;
    let step = (hi - lo) / (n - 1) as f64;
    let node = |i: usize| if i == n - 1 { hi } else { lo + step * i as f64 };
    let mut best_i = 0;
    let mut best_v = f64::INFINITY;
    for i in 0..n {
        let v = eval(f, node(i))?;
        if v < best_v {
            best_v = v;
            best_i = i;
        }
    }
    let mut best_x = node(best_i);

    let mut a = node(best_i.saturating_sub(1));
    let mut b = node((best_i + 1).min(n - 1));
    let xtol = |x: f64| 1e-3 * tol.abs_tol.sqrt() * (1.0 + x.abs());
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = eval(f, c)?;
    let mut fd = eval(f, d)?;
    let mut evals = n + 2;
    while (b - a) > xtol(0.5 * (a + b)) && evals < tol.max_evals {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(f, c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(f, d)?;
        }
        evals += 1;
    }
    for (x, v) in [(c, fc), (d, fd)] {
        if v < best_v {
            best_v = v;
            best_x = x;
        }
    }
    Ok((best_x, best_v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn quadratic_minimum() {
        let (x, v) =
            minimize_scalar(|x| (x - 1.0) * (x - 1.0), Interval::new(0.0, 3.0).unwrap(), &tol())
                .unwrap();
        assert!((x - 1.0).abs() < 1e-6);
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn monotone_objective_lands_on_endpoint() {
        let (x, _) = minimize_scalar(|x| x, Interval::new(0.0, 1.0).unwrap(), &tol()).unwrap();
        assert_eq!(x, 0.0);
        let (x, _) = minimize_scalar(|x| -x, Interval::new(0.0, 1.0).unwrap(), &tol()).unwrap();
        assert_eq!(x, 1.0);
    }

    #[test]
    fn unbounded_domain_is_refused() {
        let err = minimize_scalar(|x| x * x, Interval::real_line(), &tol()).unwrap_err();
        assert!(matches!(err, NumericsError::UnboundedSearch { .. }));
    }

    #[test]
    fn prescan_escapes_shallow_basin() {
        // Shallow local minimum near 0.1, global one near 0.8.
        let f = |x: f64| -0.2 * (-((x - 0.1) / 0.02).powi(2)).exp() - (-((x - 0.8) / 0.05).powi(2)).exp();
        let (x, _) = minimize_scalar(f, Interval::new(0.0, 1.0).unwrap(), &tol()).unwrap();
        assert!((x - 0.8).abs() < 1e-6);
    }

    #[test]
    fn tails_win_when_lower() {
        let f = |x: f64| 1.0 + (-x * x).exp();
        let m = minimize_with_tails(
            f,
            Interval::new(-5.0, 5.0).unwrap(),
            TailLimits {
                lower: Some(1.0),
                upper: Some(1.5),
            },
            &tol(),
        )
        .unwrap();
        assert_eq!(m.source, MinimumSource::LowerTail);
        assert_eq!(m.value, 1.0);
        assert!(m.window_value > 1.0);
    }
}

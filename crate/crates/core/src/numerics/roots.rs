use super::{Interval, NumericsError, ToleranceConfig};

/// Bracketed root of `f` on a finite `bracket`.
///
/// Brent's method: inverse quadratic / secant steps, each accepted only
/// while it beats bisection, so the bracket shrinks monotonically. Stops
/// when the bracket half-width reaches `abs_tol` (plus a few ulps of the
/// iterate) or `f` vanishes exactly.
pub fn find_root<F: Fn(f64) -> f64>(
    f: F,
    bracket: Interval,
    tol: &ToleranceConfig,
) -> Result<f64, NumericsError> {
    if !bracket.is_bounded() {
        return Err(NumericsError::InvalidInterval {
            lo: bracket.lo(),
            hi: bracket.hi(),
        });
    }
    let (mut a, mut b) = (bracket.lo(), bracket.hi());
    let mut fa = f(a);
    let mut fb = f(b);
    if fa.is_nan() {
        return Err(NumericsError::NanObjective { at: a });
    }
    if fb.is_nan() {
        return Err(NumericsError::NanObjective { at: b });
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(NumericsError::NoSignChange {
            lo: a,
            hi: b,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    let mut evals = 2;
    while evals < tol.max_evals {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol.abs_tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += tol1.copysign(xm);
        }
        fb = f(b);
        evals += 1;
        if fb.is_nan() {
            return Err(NumericsError::NanObjective { at: b });
        }
    }
    if fb.signum() == fc.signum() {
        c = a;
    }
    let (lo, hi) = if b < c { (b, c) } else { (c, b) };
    Err(NumericsError::RootNotConverged { lo, hi })
}

/// Grows a bracket `[start - w, start + w]` by doubling `w` (starting at
/// `initial_step`) until `f` changes sign across it. Probes are clamped to
/// `limits`, which must contain `start`.
pub fn expand_bracket<F: Fn(f64) -> f64>(
    f: F,
    start: f64,
    initial_step: f64,
    limits: Interval,
    max_doublings: usize,
) -> Result<Interval, NumericsError> {
    let f0 = f(start);
    if f0.is_nan() {
        return Err(NumericsError::NanObjective { at: start });
    }
    let mut w = initial_step;
    let mut last = start;
    for _ in 0..max_doublings {
        let lo = (start - w).max(limits.lo());
        let hi = (start + w).min(limits.hi());
        let (flo, fhi) = (f(lo), f(hi));
        if flo.is_nan() {
            return Err(NumericsError::NanObjective { at: lo });
        }
        if fhi.is_nan() {
            return Err(NumericsError::NanObjective { at: hi });
        }
        if f0 == 0.0 {
            return Interval::new(lo, hi);
        }
        if flo == 0.0 || flo.signum() != f0.signum() {
            return Interval::new(lo, start);
        }
        if fhi == 0.0 || fhi.signum() != f0.signum() {
            return Interval::new(start, hi);
        }
        last = hi;
        w *= 2.0;
    }
    Err(NumericsError::BracketNotFound { start, last })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_root() {
        let x = find_root(
            |x| x - 0.5,
            Interval::new(0.0, 1.0).unwrap(),
            &ToleranceConfig::default(),
        )
        .unwrap();
        assert!((x - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn no_sign_change_is_an_error() {
        let err = find_root(
            |x| x * x + 1.0,
            Interval::new(-1.0, 1.0).unwrap(),
            &ToleranceConfig::default(),
        )
        .unwrap_err();
        assert!(matches!(err, NumericsError::NoSignChange { .. }));
    }

    #[test]
    fn flat_tail_still_converges() {
        // exp(-x^2) - 1e-12 is nearly flat over most of the bracket.
        let f = |x: f64| (-x * x).exp() - 1e-12;
        let x = find_root(f, Interval::new(0.0, 50.0).unwrap(), &ToleranceConfig::default())
            .unwrap();
        assert!((x - (1e12f64).ln().sqrt()).abs() < 1e-10);
    }

    #[test]
    fn iteration_budget_is_reported() {
        let tol = ToleranceConfig::new(1e-300, 1e-10, 5).unwrap();
        let err = find_root(|x| x.powi(3) - 0.3, Interval::new(0.0, 1.0).unwrap(), &tol)
            .unwrap_err();
        match err {
            NumericsError::RootNotConverged { lo, hi } => {
                let root = 0.3f64.cbrt();
                assert!(lo <= root && root <= hi)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bracket_expansion_finds_far_root() {
        let b = expand_bracket(|x| x - 37.0, 0.0, 1.0, Interval::real_line(), 60).unwrap();
        assert!(b.lo() <= 37.0 && b.hi() >= 37.0);
        let b = expand_bracket(|x| x + 5.0, 0.0, 1.0, Interval::real_line(), 60).unwrap();
        assert!(b.lo() <= -5.0 && b.hi() >= -5.0);
    }
}

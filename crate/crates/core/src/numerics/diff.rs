/// Richardson-extrapolated central difference of `f` at `x`.
///
/// Combines steps `h` and `h/2` with `h = 1e-3 (1 + |x|)`, which cancels the
/// `h^2` truncation term while keeping cancellation noise near `1e-13 / h`.
pub fn central_difference<F: Fn(f64) -> f64>(f: F, x: f64) -> f64 {
    let h = 1e-3 * (1.0 + x.abs());
    let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
    let h2 = 0.5 * h;
    let d2 = (f(x + h2) - f(x - h2)) / (2.0 * h2);
    (4.0 * d2 - d1) / 3.0
}

/// True iff the central difference of `f` matches the claimed derivative
/// `g` within `tol * (1 + |g|)` at every point.
pub fn derivative_check<F, G>(f: F, g: G, points: &[f64], tol: f64) -> bool
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    points.iter().all(|&x| {
        let claimed = g(x);
        let estimate = central_difference(&f, x);
        (estimate - claimed).abs() <= tol * (1.0 + claimed.abs())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_has_derivative_two_x() {
        assert!(derivative_check(|x| x * x, |x| 2.0 * x, &[0.0, 1.0, 2.0], 1e-8));
    }

    #[test]
    fn wrong_derivative_is_rejected() {
        assert!(!derivative_check(|x| x * x, |x| 3.0 * x, &[1.0], 1e-6));
    }

    #[test]
    fn smooth_transcendental() {
        assert!(derivative_check(f64::sin, f64::cos, &[-3.0, 0.1, 7.5], 1e-9));
    }
}

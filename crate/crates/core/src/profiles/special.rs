use std::f64::consts::LN_2;

/// `ln cosh x` without overflow for large `|x|`.
pub(crate) fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

/// `ln sinh x` for `x > 0`, accurate both near zero and for large `x`.
pub(crate) fn ln_sinh(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    x + (-(-2.0 * x).exp_m1()).ln() - LN_2
}

/// `ln(cosh x + beta sinh x)` for `|beta| < 1`.
pub(crate) fn ln_cosh_plus_beta_sinh(x: f64, beta: f64) -> f64 {
    let a = x.abs();
    let b = beta * x.signum();
    a + ((1.0 + b) + (1.0 - b) * (-2.0 * a).exp()).ln() - LN_2
}

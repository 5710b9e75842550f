use std::cell::Cell;

use crate::numerics::{
    expand_bracket, find_root, minimize_scalar, minimize_with_tails, Interval, Minimum, TailLimits,
    ToleranceConfig,
};
use crate::{Error, Result};

/// Runs a scalar routine on a fallible objective, surfacing the first
/// objective error instead of the NaN handed to the routine.
fn with_fallible<F, R>(f: F, run: impl FnOnce(&dyn Fn(f64) -> f64) -> Result<R>) -> Result<R>
where
    F: Fn(f64) -> Result<f64>,
{
    let failure: Cell<Option<Error>> = Cell::new(None);
    let g = |x: f64| match f(x) {
        Ok(y) => y,
        Err(e) => {
            failure.set(Some(e));
            f64::NAN
        }
    };
    let out = run(&g);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    out
}

pub(crate) fn root<F>(f: F, bracket: Interval, tol: &ToleranceConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    with_fallible(f, |g| Ok(find_root(g, bracket, tol)?))
}

/// Expands a bracket around `start` by doubling, then solves inside it.
pub(crate) fn root_from<F>(
    f: F,
    start: f64,
    step: f64,
    limits: Interval,
    tol: &ToleranceConfig,
) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    with_fallible(f, |g| {
        let bracket = expand_bracket(g, start, step, limits, 200)?;
        Ok(find_root(g, bracket, tol)?)
    })
}

pub(crate) fn minimize<F>(f: F, domain: Interval, tol: &ToleranceConfig) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    with_fallible(f, |g| Ok(minimize_scalar(g, domain, tol)?))
}

pub(crate) fn minimize_tails<F>(
    f: F,
    window: Interval,
    tails: TailLimits,
    tol: &ToleranceConfig,
) -> Result<Minimum>
where
    F: Fn(f64) -> Result<f64>,
{
    with_fallible(f, |g| Ok(minimize_with_tails(g, window, tails, tol)?))
}

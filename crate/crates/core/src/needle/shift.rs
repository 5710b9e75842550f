use serde::Serialize;

use super::halfline::halfline_value;
use super::line::WeightedLine;
use super::sets::{Component, IntervalUnion};
use super::MinimizerReport;
use crate::{Error, Result};

pub const DEFAULT_STEP_LIMIT: usize = 100_000;

/// Result of shifting a bounded interval at fixed mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ShiftOutcome {
    Moved(Component),
    /// The interval no longer fits and became the tail of equal mass.
    Escaped(Component),
}

impl ShiftOutcome {
    pub fn component(&self) -> Component {
        match *self {
            ShiftOutcome::Moved(c) | ShiftOutcome::Escaped(c) => c,
        }
    }
}

fn bounded(c: Component) -> Result<()> {
    if c.lo.is_finite() && c.hi.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("shift needs a bounded interval, got [{}, {}]", c.lo, c.hi)))
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("shift step must be positive, got {eps}")))
    }
}

/// `(a, b) -> (a + eps, b + g(eps))` with the mass kept fixed.
pub fn right_shift(line: &WeightedLine, c: Component, eps: f64) -> Result<ShiftOutcome> {
    bounded(c)?;
    check_eps(eps)?;
    let mass = line.mass_between(c.lo, c.hi)?;
    right_shift_mass(line, c, eps, mass)
}

/// `(a, b) -> (a - g(eps), b - eps)` with the mass kept fixed.
pub fn left_shift(line: &WeightedLine, c: Component, eps: f64) -> Result<ShiftOutcome> {
    bounded(c)?;
    check_eps(eps)?;
    let mass = line.mass_between(c.lo, c.hi)?;
    left_shift_mass(line, c, eps, mass)
}

fn right_shift_mass(line: &WeightedLine, c: Component, eps: f64, mass: f64) -> Result<ShiftOutcome> {
    let lo = c.lo + eps;
    let room = line.upper_mass(lo)?;
    if room <= mass || lo >= line.support().hi() {
        let b = line.upper_quantile(mass)?;
        return Ok(ShiftOutcome::Escaped(Component::new(b, line.domain().hi())?));
    }
    let hi = line.upper_quantile(room - mass)?;
    Ok(ShiftOutcome::Moved(Component::new(lo, hi)?))
}

fn left_shift_mass(line: &WeightedLine, c: Component, eps: f64, mass: f64) -> Result<ShiftOutcome> {
    let hi = c.hi - eps;
    let room = line.lower_mass(hi)?;
    if room <= mass || hi <= line.support().lo() {
        let a = line.lower_quantile(mass)?;
        return Ok(ShiftOutcome::Escaped(Component::new(line.domain().lo(), a)?));
    }
    let lo = line.lower_quantile(room - mass)?;
    Ok(ShiftOutcome::Moved(Component::new(lo, hi)?))
}

/// A component together with the mass it must keep.
#[derive(Debug, Clone, Copy)]
struct Piece {
    c: Component,
    mass: f64,
}

pub(crate) fn report(line: &WeightedLine, set: IntervalUnion) -> Result<MinimizerReport> {
    let mass = line.measure(&set)?;
    let boundary = line.boundary_measure(&set);
    let profile_value = if mass > 0.0 && mass < 1.0 {
        halfline_value(line, mass)?
    } else {
        0.0
    };
    Ok(MinimizerReport {
        is_halfline: line.is_halfline(&set),
        set,
        mass,
        boundary,
        profile_value,
    })
}

fn union_of(pieces: &[Piece]) -> Result<IntervalUnion> {
    let raw: Vec<(f64, f64)> = pieces.iter().map(|p| (p.c.lo, p.c.hi)).collect();
    IntervalUnion::new(&raw)
}

/// Repeatedly shifts bounded components outward (right when `a + b >= 0`,
/// left otherwise), merging on contact, until a half-line remains. A set
/// of the form `(-inf, a] u [b, inf)` is handled through its complement.
///
/// Returns the trajectory, starting with the input set.
pub fn reduce_to_halfline(line: &WeightedLine, set: &IntervalUnion) -> Result<Vec<MinimizerReport>> {
    reduce_with_limit(line, set, DEFAULT_STEP_LIMIT)
}

pub fn reduce_with_limit(
    line: &WeightedLine,
    set: &IntervalUnion,
    step_limit: usize,
) -> Result<Vec<MinimizerReport>> {
    let d = line.domain();
    if !(d.lo_is_infinite() && d.hi_is_infinite()) || !line.is_symmetric() {
        return Err(Error::Parameter(
            "set reduction needs a symmetric measure on the whole line".into(),
        ));
    }
    let eps = 1e-2 * line.support().width();
    let mut pieces = Vec::new();
    for c in set.components() {
        pieces.push(Piece {
            c: *c,
            mass: line.mass_between(c.lo, c.hi)?,
        });
    }
    let mut complemented = false;
    let current = |pieces: &[Piece], complemented: bool| -> Result<IntervalUnion> {
        let u = union_of(pieces)?;
        Ok(if complemented { u.complement() } else { u })
    };
    let mut trajectory = vec![report(line, set.clone())?];
    let mut steps = 0;
    loop {
        let u = union_of(&pieces)?;
        if u.is_empty() || u == IntervalUnion::whole_line() || u.is_halfline() {
            break;
        }
        if u.is_two_tails() {
            let total: f64 = pieces.iter().map(|p| p.mass).sum();
            let c = u.complement().components()[0];
            pieces = vec![Piece { c, mass: 1.0 - total }];
            complemented = !complemented;
            continue;
        }
        if steps >= step_limit {
            return Err(Error::StepLimit {
                limit: step_limit,
                trajectory: Box::new(trajectory),
            });
        }
        let idx = pieces
            .iter()
            .enumerate()
            .filter(|(_, p)| p.c.lo.is_finite() && p.c.hi.is_finite())
            .max_by(|(i, p), (j, q)| {
                p.c.midpoint_sum()
                    .abs()
                    .total_cmp(&q.c.midpoint_sum().abs())
                    .then(j.cmp(i))
            })
            .map(|(i, _)| i)
            .expect("a non-trivial set has a bounded component");
        let piece = pieces[idx];
        if piece.c.midpoint_sum() >= 0.0 {
            step_right(line, &mut pieces, idx, eps)?;
        } else {
            step_left(line, &mut pieces, idx, eps)?;
        }
        steps += 1;
        trajectory.push(report(line, current(&pieces, complemented)?)?);
    }
    Ok(trajectory)
}

fn step_right(line: &WeightedLine, pieces: &mut Vec<Piece>, idx: usize, eps: f64) -> Result<()> {
    let p = pieces[idx];
    let outcome = right_shift_mass(line, p.c, eps, p.mass)?;
    if let Some(&next) = pieces.get(idx + 1) {
        let hits = match outcome {
            ShiftOutcome::Moved(c) => c.hi >= next.c.lo,
            ShiftOutcome::Escaped(_) => true,
        };
        if hits {
            // Slide exactly up to the neighbour and merge.
            let lo = line.lower_quantile(line.lower_mass(next.c.lo)? - p.mass)?;
            pieces[idx] = Piece {
                c: Component::new(lo, next.c.hi)?,
                mass: p.mass + next.mass,
            };
            pieces.remove(idx + 1);
            return Ok(());
        }
    }
    pieces[idx].c = outcome.component();
    Ok(())
}

fn step_left(line: &WeightedLine, pieces: &mut Vec<Piece>, idx: usize, eps: f64) -> Result<()> {
    let p = pieces[idx];
    let outcome = left_shift_mass(line, p.c, eps, p.mass)?;
    if idx > 0 {
        let prev = pieces[idx - 1];
        let hits = match outcome {
            ShiftOutcome::Moved(c) => c.lo <= prev.c.hi,
            ShiftOutcome::Escaped(_) => true,
        };
        if hits {
            let hi = line.upper_quantile(line.upper_mass(prev.c.hi)? - p.mass)?;
            pieces[idx - 1] = Piece {
                c: Component::new(prev.c.lo, hi)?,
                mass: p.mass + prev.mass,
            };
            pieces.remove(idx);
            return Ok(());
        }
    }
    pieces[idx].c = outcome.component();
    Ok(())
}

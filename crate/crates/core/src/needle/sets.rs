use std::fmt;

use serde::Serialize;

use crate::{Error, Result};

/// A closed interval `[lo, hi]` whose ends may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Component {
    pub lo: f64,
    pub hi: f64,
}

impl Component {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY
        {
            return Err(Error::Parameter(format!("invalid component [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn midpoint_sum(&self) -> f64 {
        self.lo + self.hi
    }
}

/// A finite union of disjoint intervals in canonical form: sorted, with
/// positive gaps between consecutive components.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalUnion {
    components: Vec<Component>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        Self {
            components: Vec::new(),
        }
    }

    pub fn whole_line() -> Self {
        Self {
            components: vec![Component {
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
            }],
        }
    }

    /// Canonicalizes arbitrary `(lo, hi)` pairs: sorts, merges overlapping
    /// or touching pieces (which also drops isolated points of the
    /// complement) and rejects degenerate pieces.
    pub fn new(pieces: &[(f64, f64)]) -> Result<Self> {
        let mut comps = pieces
            .iter()
            .map(|&(lo, hi)| Component::new(lo, hi))
            .collect::<Result<Vec<_>>>()?;
        comps.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let mut merged: Vec<Component> = Vec::with_capacity(comps.len());
        for c in comps {
            match merged.last_mut() {
                Some(last) if c.lo <= last.hi => last.hi = last.hi.max(c.hi),
                _ => merged.push(c),
            }
        }
        Ok(Self { components: merged })
    }

    pub fn left_half_line(a: f64) -> Result<Self> {
        Self::new(&[(f64::NEG_INFINITY, a)])
    }

    pub fn right_half_line(b: f64) -> Result<Self> {
        Self::new(&[(b, f64::INFINITY)])
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Finite endpoints, each counted once.
    pub fn boundary_points(&self) -> Vec<f64> {
        self.components
            .iter()
            .flat_map(|c| [c.lo, c.hi])
            .filter(|x| x.is_finite())
            .collect()
    }

    /// `(-inf, a]` or `[b, inf)`.
    pub fn is_halfline(&self) -> bool {
        match self.components.as_slice() {
            [c] => c.lo.is_infinite() != c.hi.is_infinite(),
            _ => false,
        }
    }

    /// `(-inf, a] u [b, inf)` with `a < b`.
    pub fn is_two_tails(&self) -> bool {
        match self.components.as_slice() {
            [l, r] => l.lo.is_infinite() && r.hi.is_infinite(),
            _ => false,
        }
    }

    /// Closure of the complement in the real line.
    pub fn complement(&self) -> Self {
        let mut out = Vec::with_capacity(self.components.len() + 1);
        let mut cursor = f64::NEG_INFINITY;
        for c in &self.components {
            if c.lo > cursor {
                out.push(Component { lo: cursor, hi: c.lo });
            }
            cursor = c.hi;
        }
        if cursor < f64::INFINITY {
            out.push(Component {
                lo: cursor,
                hi: f64::INFINITY,
            });
        }
        Self { components: out }
    }

    /// Mirror image under `x -> -x`.
    pub fn reflect(&self) -> Self {
        let mut comps: Vec<Component> = self
            .components
            .iter()
            .map(|c| Component { lo: -c.hi, hi: -c.lo })
            .collect();
        comps.reverse();
        Self { components: comps }
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|c| format!("[{}, {}]", c.lo, c.hi))
            .collect();
        write!(f, "{}", parts.join(" u "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_merges_touching_pieces() {
        let u = IntervalUnion::new(&[(2.0, 3.0), (0.0, 1.0), (1.0, 1.5)]).unwrap();
        assert_eq!(
            u.components(),
            &[Component { lo: 0.0, hi: 1.5 }, Component { lo: 2.0, hi: 3.0 }]
        );
    }

    #[test]
    fn complement_of_two_tails_is_an_interval() {
        let u = IntervalUnion::new(&[(f64::NEG_INFINITY, -1.0), (1.0, f64::INFINITY)]).unwrap();
        assert!(u.is_two_tails());
        assert_eq!(u.complement().components(), &[Component { lo: -1.0, hi: 1.0 }]);
        assert_eq!(u.complement().complement(), u);
    }

    #[test]
    fn halfline_detection_and_reflection() {
        let u = IntervalUnion::left_half_line(0.3).unwrap();
        assert!(u.is_halfline());
        assert_eq!(u.reflect(), IntervalUnion::right_half_line(-0.3).unwrap());
        assert!(!IntervalUnion::whole_line().is_halfline());
    }

    #[test]
    fn degenerate_pieces_are_rejected() {
        assert!(IntervalUnion::new(&[(1.0, 1.0)]).is_err());
    }
}

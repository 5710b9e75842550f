//! Parsers for the literal tokens accepted on the command line.

use std::ops::Deref;

use isoprofile_core::needle::IntervalUnion;
use isoprofile_core::{Diameter, Dimension};

/// A parsed comma list; wrapped so clap treats it as one value.
#[derive(Debug, Clone, PartialEq)]
pub struct List<T>(pub Vec<T>);

impl<T> Deref for List<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.0
    }
}

fn number(s: &str) -> Result<f64, String> {
    match s.trim() {
        "inf" | "+inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        t => t.parse::<f64>().map_err(|e| format!("'{t}' is not a number: {e}")),
    }
}

fn finite(s: &str) -> Result<f64, String> {
    let x = number(s)?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("'{s}' must be finite"))
    }
}

/// `inf` or a negative number.
pub fn dimension(s: &str) -> Result<Dimension, String> {
    match number(s)? {
        x if x == f64::INFINITY => Ok(Dimension::Infinite),
        x if x < 0.0 && x.is_finite() => Ok(Dimension::Negative(x)),
        x => Err(format!("N must be 'inf' or negative, got {x}")),
    }
}

/// `inf` or a positive number.
pub fn diameter(s: &str) -> Result<Diameter, String> {
    match number(s)? {
        x if x == f64::INFINITY => Ok(Diameter::Unbounded),
        x if x > 0.0 => Ok(Diameter::Finite(x)),
        x => Err(format!("D must be 'inf' or positive, got {x}")),
    }
}

/// Comma-separated finite numbers.
pub fn list(s: &str) -> Result<List<f64>, String> {
    s.split(',').map(finite).collect::<Result<_, _>>().map(List)
}

/// Comma-separated node counts.
pub fn counts(s: &str) -> Result<List<usize>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| format!("'{t}' is not a count: {e}")))
        .collect::<Result<_, _>>()
        .map(List)
}

/// A comma-separated list or an inclusive range `start:stop:step`; values
/// must lie in (0, 1) and increase strictly.
pub fn thetas(s: &str) -> Result<List<f64>, String> {
    let values = if s.contains(':') {
        let parts: Vec<f64> = s.split(':').map(finite).collect::<Result<_, _>>()?;
        let [start, stop, step] = parts[..] else {
            return Err(format!("range '{s}' must be start:stop:step"));
        };
        if !(step > 0.0) {
            return Err(format!("range step must be positive, got {step}"));
        }
        let count = ((stop - start) / step + 1e-9).floor();
        if count < 0.0 {
            return Err(format!("empty range '{s}'"));
        }
        // Snap to 12 decimals so 0.1:0.9:0.1 yields 0.3 rather than 0.30000000000000004.
        (0..=count as usize)
            .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
            .collect()
    } else {
        list(s)?.0
    };
    if let Some(bad) = values.iter().find(|t| !(**t > 0.0 && **t < 1.0)) {
        return Err(format!("theta = {bad} lies outside (0, 1)"));
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err("theta values must increase strictly".into());
    }
    Ok(List(values))
}

/// Components `lo:hi` separated by commas, e.g. `-inf:-1,0.5:2`.
pub fn set(s: &str) -> Result<IntervalUnion, String> {
    let pairs = s
        .split(',')
        .map(|c| {
            let (lo, hi) = c
                .split_once(':')
                .ok_or_else(|| format!("component '{c}' must be lo:hi"))?;
            let (lo, hi) = (number(lo)?, number(hi)?);
            if lo.is_nan() || hi.is_nan() || lo >= hi {
                return Err(format!("component '{c}' is empty"));
            }
            Ok((lo, hi))
        })
        .collect::<Result<Vec<_>, String>>()?;
    IntervalUnion::new(&pairs).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_are_inclusive_and_snapped() {
        let t = thetas("0.1:0.9:0.1").unwrap();
        assert_eq!(t.len(), 9);
        assert_eq!(t[2], 0.3);
        assert_eq!(t[8], 0.9);
    }

    #[test]
    fn bad_theta_grids_are_rejected() {
        assert!(thetas("0.5,0.4").is_err());
        assert!(thetas("0,0.5").is_err());
        assert!(thetas("0.1:0.9:0").is_err());
        assert!(thetas("0.1:0.9").is_err());
    }

    #[test]
    fn infinite_tokens() {
        assert_eq!(dimension("inf").unwrap(), Dimension::Infinite);
        assert_eq!(dimension("-2").unwrap(), Dimension::Negative(-2.0));
        assert!(dimension("3").is_err());
        assert_eq!(diameter("inf").unwrap(), Diameter::Unbounded);
        assert!(diameter("0").is_err());
    }

    #[test]
    fn sets_parse_with_infinite_ends() {
        let s = set("-inf:-1,0.5:2").unwrap();
        assert_eq!(s.components().len(), 2);
        assert_eq!(s.components()[0].lo, f64::NEG_INFINITY);
        assert!(set("2:1").is_err());
    }
}

use serde::Serialize;

use crate::{Error, Result};

/// Shape-preserving (Fritsch–Carlson) cubic Hermite interpolant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let n = xs.len();
        if n < 2 || ys.len() != n {
            return Err(Error::Parameter("need at least two (x, y) pairs".into()));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Parameter("x values must be strictly increasing".into()));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::Parameter("table values must be finite".into()));
        }
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
        let mut slopes = vec![0.0; n];
        if n == 2 {
            slopes = vec![delta[0]; 2];
        } else {
            for i in 1..n - 1 {
                let (d0, d1) = (delta[i - 1], delta[i]);
                if d0 * d1 > 0.0 {
                    let w1 = 2.0 * h[i] + h[i - 1];
                    let w2 = h[i] + 2.0 * h[i - 1];
                    slopes[i] = (w1 + w2) / (w1 / d0 + w2 / d1);
                }
            }
            slopes[0] = end_slope(h[0], h[1], delta[0], delta[1]);
            slopes[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        Ok(Self { xs, ys, slopes })
    }

    pub fn x_min(&self) -> f64 {
        self.xs[0]
    }

    pub fn x_max(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    fn segment(&self, x: f64) -> usize {
        let i = self.xs.partition_point(|&v| v <= x);
        i.saturating_sub(1).min(self.xs.len() - 2)
    }

    /// Value, first and second derivative at `x` (extrapolating the end
    /// cubics outside the table).
    pub fn eval(&self, x: f64) -> (f64, f64, f64) {
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let v = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * m1;
        let d = (6.0 * t2 - 6.0 * t) * y0
            + (3.0 * t2 - 4.0 * t + 1.0) * m0
            + (-6.0 * t2 + 6.0 * t) * y1
            + (3.0 * t2 - 2.0 * t) * m1;
        let dd = (12.0 * t - 6.0) * y0
            + (6.0 * t - 4.0) * m0
            + (-12.0 * t + 6.0) * y1
            + (6.0 * t - 2.0) * m1;
        (v, d / h, dd / (h * h))
    }
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if s.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && s.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        s
    }
}

/// Parses a potential table: one `x psi(x)` pair per line, separated by
/// whitespace or a comma. Blank lines and text after `#` are ignored.
pub fn parse_table(text: &str) -> Result<MonotoneCubic> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        let err = |message: String| Error::Table {
            line: idx + 1,
            message,
        };
        if fields.len() != 2 {
            return Err(err(format!("expected two fields, found {}", fields.len())));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| err(format!("cannot parse {s:?}: {e}")))
        };
        xs.push(parse(fields[0])?);
        ys.push(parse(fields[1])?);
    }
    MonotoneCubic::new(xs, ys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_nodes_and_quadratics_roughly() {
        let xs: Vec<f64> = (0..=40).map(|i| -4.0 + 0.2 * i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 0.5 * x * x).collect();
        let c = MonotoneCubic::new(xs.clone(), ys.clone()).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert!((c.eval(*x).0 - y).abs() < 1e-14);
        }
        let (v, d, dd) = c.eval(1.1);
        assert!((v - 0.605).abs() < 2e-3);
        assert!((d - 1.1).abs() < 5e-2);
        assert!((dd - 1.0).abs() < 0.5);
    }

    #[test]
    fn preserves_monotonicity() {
        let c = MonotoneCubic::new(vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 0.0, 1.0, 1.0]).unwrap();
        let mut last = f64::NEG_INFINITY;
        for i in 0..=300 {
            let v = c.eval(i as f64 * 0.01).0;
            assert!(v >= last - 1e-15);
            last = v;
        }
    }

    #[test]
    fn parser_accepts_comments_and_commas() {
        let c = parse_table("# x psi\n0, 1\n1 2 # trailing\n\n2,5\n").unwrap();
        assert_eq!(c.x_min(), 0.0);
        assert_eq!(c.x_max(), 2.0);
        assert!(matches!(parse_table("0 1\n1\n"), Err(Error::Table { line: 2, .. })));
        assert!(matches!(parse_table("0 a\n"), Err(Error::Table { line: 1, .. })));
        assert!(parse_table("0 1\n0 2\n").is_err());
    }
}

use std::fmt;

use serde::Serialize;

use crate::{Error, Result};

/// Effective dimension `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Dimension {
    Infinite,
    Negative(f64),
}

/// Diameter bound `D`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Diameter {
    Finite(f64),
    Unbounded,
}

/// Curvature `K > 0`, effective dimension `N` and diameter `D` of a model
/// space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    k: f64,
    n: Dimension,
    d: Diameter,
}

impl ModelParams {
    pub fn new(k: f64, n: Dimension, d: Diameter) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::Parameter(format!("curvature K must be positive, got {k}")));
        }
        if let Dimension::Negative(n) = n {
            if !(n < 0.0 && n.is_finite()) {
                return Err(Error::Parameter(format!(
                    "effective dimension must be negative or infinite, got {n}"
                )));
            }
        }
        if let Diameter::Finite(d) = d {
            if !(d > 0.0 && d.is_finite()) {
                return Err(Error::Parameter(format!("diameter must be positive, got {d}")));
            }
        }
        Ok(Self { k, n, d })
    }

    pub fn gaussian(k: f64) -> Result<Self> {
        Self::new(k, Dimension::Infinite, Diameter::Unbounded)
    }

    pub fn negative(k: f64, n: f64) -> Result<Self> {
        Self::new(k, Dimension::Negative(n), Diameter::Unbounded)
    }

    pub fn with_diameter(self, d: f64) -> Result<Self> {
        Self::new(self.k, self.n, Diameter::Finite(d))
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn dimension(&self) -> Dimension {
        self.n
    }

    pub fn diameter(&self) -> Diameter {
        self.d
    }

    /// `N` when negative.
    pub fn n_value(&self) -> Option<f64> {
        match self.n {
            Dimension::Negative(n) => Some(n),
            Dimension::Infinite => None,
        }
    }

    /// `sigma = K / (1 - N)` for negative `N`.
    pub fn sigma(&self) -> Option<f64> {
        self.n_value().map(|n| self.k / (1.0 - n))
    }

    /// `N = inf` or `N < -1`, where the equality cases are characterized.
    pub fn in_rigidity_regime(&self) -> bool {
        match self.n {
            Dimension::Infinite => true,
            Dimension::Negative(n) => n < -1.0,
        }
    }

    /// Sharp spectral gap `K N / (N - 1)` (`K` when `N = inf`).
    pub fn spectral_gap(&self) -> f64 {
        match self.n {
            Dimension::Infinite => self.k,
            Dimension::Negative(n) => self.k * n / (n - 1.0),
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dimension::Infinite => write!(f, "inf"),
            Dimension::Negative(n) => write!(f, "{n}"),
        }
    }
}

impl fmt::Display for Diameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diameter::Unbounded => write!(f, "inf"),
            Diameter::Finite(d) => write!(f, "{d}"),
        }
    }
}

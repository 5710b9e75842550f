//! First non-zero eigenvalue of the weighted Laplacian
//! `Delta_m u = u'' - psi' u'` on a weighted line, computed from a
//! conservative finite-difference discretization with Neumann ends.
//!
//! The discrete operator is self-adjoint for the trapezoid measure
//! `mu_i = w_i h` (halved at the ends), so its spectrum is real and the
//! constant vector spans the kernel. After the symmetric rescaling
//! `B = M^{-1/2} S M^{-1/2}` the problem is a symmetric tridiagonal
//! eigenproblem: Sturm bisection pins the second eigenvalue and inverse
//! iteration, deflated against the kernel, recovers the eigenvector.

mod tridiag;

use rayon::prelude::*;
use serde::Serialize;

use crate::needle::WeightedLine;
use crate::numerics::{integrate, Interval};
use crate::{Dimension, Error, ModelParams, Result};

use tridiag::{kth_eigenvalue, solve_shifted, tridiag_apply};

/// Relative tail mass allowed outside the grid.
pub const GRID_TAIL_MASS: f64 = 1e-8;
const MIN_NODES: usize = 16;
const FLOOR_WEIGHT: f64 = 1e-300;

/// Uniform grid on `[lo, hi]` with `n` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid1D {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub h: f64,
}

impl Grid1D {
    /// Grid on `[-half_width, half_width]` (clipped to the domain of
    /// `line`), refused if more than `GRID_TAIL_MASS` of the measure lies
    /// outside it.
    pub fn new(line: &WeightedLine, half_width: f64, n: usize) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::Parameter(format!("half-width must be positive, got {half_width}")));
        }
        let d = line.domain();
        let lo = (-half_width).max(d.lo());
        let hi = half_width.min(d.hi());
        let grid = Self::on_interval(Interval::new(lo, hi)?, n)?;
        let tail = line.lower_mass(lo)? + line.upper_mass(hi)?;
        if tail > GRID_TAIL_MASS {
            let q = 0.5 * GRID_TAIL_MASS;
            let left = if d.lo_is_infinite() { -line.lower_quantile(q)? } else { 0.0 };
            let right = if d.hi_is_infinite() { line.upper_quantile(q)? } else { 0.0 };
            return Err(Error::TailTooHeavy {
                tail_mass: tail,
                required_half_width: left.max(right),
            });
        }
        Ok(grid)
    }

    /// Grid on a bounded interval, without any tail check.
    pub fn on_interval(interval: Interval, n: usize) -> Result<Self> {
        if n < MIN_NODES {
            return Err(Error::Parameter(format!("need at least {MIN_NODES} nodes, got {n}")));
        }
        if !interval.is_bounded() {
            return Err(Error::Parameter("grid interval must be bounded".into()));
        }
        let (lo, hi) = (interval.lo(), interval.hi());
        Ok(Self {
            lo,
            hi,
            n,
            h: (hi - lo) / (n - 1) as f64,
        })
    }

    /// Grid whose half-width keeps the tail of the model eigenfunction's
    /// variance integrand below `GRID_TAIL_MASS`.
    pub fn auto(line: &WeightedLine, params: &ModelParams, n: usize) -> Result<Self> {
        let target = (1.0 / GRID_TAIL_MASS).ln();
        let half_width = match params.dimension() {
            Dimension::Infinite => (2.0 * (target + 2.0) / params.k()).sqrt(),
            Dimension::Negative(nn) if nn < -1.0 => {
                let s = params.sigma().expect("negative N has sigma").sqrt();
                (target + 2.0) / ((-1.0 - nn) * s)
            }
            Dimension::Negative(nn) => {
                return Err(Error::Parameter(format!(
                    "N = {nn} has no spectral gap below the essential spectrum"
                )))
            }
        };
        Self::new(line, half_width, n)
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.hi
        } else {
            self.lo + self.h * i as f64
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }
}

/// Discrete weighted Laplacian: trapezoid measure weights `mu` and edge
/// conductances `w_{i+1/2} / h`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedLaplacian {
    grid: Grid1D,
    mu: Vec<f64>,
    conductance: Vec<f64>,
}

/// Assembles the conservative three-band operator on `grid`.
pub fn assemble_weighted_laplacian(line: &WeightedLine, grid: &Grid1D) -> WeightedLaplacian {
    let weight = |x: f64| line.density(x).max(FLOOR_WEIGHT);
    let n = grid.n;
    let mu = (0..n)
        .map(|i| {
            let end = i == 0 || i + 1 == n;
            weight(grid.node(i)) * grid.h * if end { 0.5 } else { 1.0 }
        })
        .collect();
    let conductance = (0..n - 1)
        .map(|i| weight(0.5 * (grid.node(i) + grid.node(i + 1))) / grid.h)
        .collect();
    WeightedLaplacian {
        grid: *grid,
        mu,
        conductance,
    }
}

impl WeightedLaplacian {
    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn measure_weights(&self) -> &[f64] {
        &self.mu
    }

    /// `(Delta_m u)_i`; non-positive in the `mu` inner product.
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        let n = self.grid.n;
        (0..n)
            .map(|i| {
                let mut flux = 0.0;
                if i + 1 < n {
                    flux += self.conductance[i] * (u[i + 1] - u[i]);
                }
                if i > 0 {
                    flux -= self.conductance[i - 1] * (u[i] - u[i - 1]);
                }
                flux / self.mu[i]
            })
            .collect()
    }

    /// `sum_i mu_i u_i v_i`.
    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        self.mu.iter().zip(u).zip(v).map(|((m, a), b)| m * a * b).sum()
    }

    /// `sum_i c_{i+1/2} (u_{i+1} - u_i)(v_{i+1} - v_i)`, which equals
    /// `-<Delta_m u, v>`.
    pub fn dirichlet_form(&self, u: &[f64], v: &[f64]) -> f64 {
        self.conductance
            .iter()
            .enumerate()
            .map(|(i, c)| c * (u[i + 1] - u[i]) * (v[i + 1] - v[i]))
            .sum()
    }

    /// Weighted mean `sum mu u / sum mu`.
    pub fn mean(&self, u: &[f64]) -> f64 {
        let total: f64 = self.mu.iter().sum();
        self.mu.iter().zip(u).map(|(m, a)| m * a).sum::<f64>() / total
    }

    fn symmetrized(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.grid.n;
        let d = (0..n)
            .map(|i| {
                let left = if i > 0 { self.conductance[i - 1] } else { 0.0 };
                let right = if i + 1 < n { self.conductance[i] } else { 0.0 };
                (left + right) / self.mu[i]
            })
            .collect();
        let e = (0..n - 1)
            .map(|i| -self.conductance[i] / (self.mu[i] * self.mu[i + 1]).sqrt())
            .collect();
        (d, e)
    }
}

/// Output of [`first_nonzero_eigenvalue`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralResult {
    pub lambda1: f64,
    /// Nodal values, mean zero and unit norm in the discrete measure,
    /// oriented so the last node is non-negative.
    pub eigenvector: Vec<f64>,
    /// Discrete Rayleigh quotient of `eigenvector`.
    pub rayleigh: f64,
    /// `||B v - lambda v||` for the unit symmetrized eigenvector.
    pub residual: f64,
    pub grid: Grid1D,
    pub measure_weights: Vec<f64>,
}

const INVERSE_ITERATIONS: usize = 60;

/// Smallest non-zero eigenvalue of `-Delta_m` on `grid`.
pub fn first_nonzero_eigenvalue(line: &WeightedLine, grid: &Grid1D) -> Result<SpectralResult> {
    let op = assemble_weighted_laplacian(line, grid);
    let (d, e) = op.symmetrized();
    let n = grid.n;
    let lambda = kth_eigenvalue(&d, &e, 1);
    let scale = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));

    let mut kernel: Vec<f64> = op.mu.iter().map(|m| m.sqrt()).collect();
    normalize(&mut kernel);
    let deflate = |v: &mut Vec<f64>| {
        let c: f64 = v.iter().zip(&kernel).map(|(a, b)| a * b).sum();
        v.iter_mut().zip(&kernel).for_each(|(a, b)| *a -= c * b);
    };

    // Linear ramp plus a node-parity pattern: deterministic and never
    // orthogonal to a smooth odd or even mode.
    let mut v: Vec<f64> = (0..n)
        .map(|i| (i as f64 / (n - 1) as f64 - 0.5) + 0.1 * if i % 2 == 0 { 1.0 } else { -1.0 })
        .collect();
    deflate(&mut v);
    normalize(&mut v);
    let shift = lambda - 1e-10 * (1.0 + lambda);
    for _ in 0..INVERSE_ITERATIONS {
        let mut next = solve_shifted(&d, &e, shift, &v);
        deflate(&mut next);
        normalize(&mut next);
        if next.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>() < 0.0 {
            next.iter_mut().for_each(|a| *a = -*a);
        }
        let change = next.iter().zip(&v).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        v = next;
        if change < 1e-13 {
            break;
        }
    }
    let bv = tridiag_apply(&d, &e, &v);
    let residual = bv.iter().zip(&v).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt();
    if !(residual <= 1e-9 * scale.max(1.0)) {
        return Err(Error::EigenNotConverged { residual });
    }

    let mut u: Vec<f64> = v.iter().zip(&op.mu).map(|(a, m)| a / m.sqrt()).collect();
    if u[n - 1] < 0.0 {
        u.iter_mut().for_each(|a| *a = -*a);
    }
    let rayleigh = op.dirichlet_form(&u, &u) / op.inner(&u, &u);
    Ok(SpectralResult {
        lambda1: lambda,
        eigenvector: u,
        rayleigh,
        residual,
        grid: *grid,
        measure_weights: op.mu,
    })
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    v.iter_mut().for_each(|a| *a /= norm);
}

/// `int v'^2 dm / Var_m(v)` by adaptive quadrature over the whole domain.
pub fn rayleigh_quotient(
    line: &WeightedLine,
    v: impl Fn(f64) -> f64,
    dv: impl Fn(f64) -> f64,
) -> Result<f64> {
    let domain = line.domain();
    let tol = line.tolerance();
    // Growing test functions may overflow where the density has underflowed.
    let against = |g: &dyn Fn(f64) -> f64| {
        integrate(
            |x| match line.density(x) {
                0.0 => 0.0,
                w => g(x) * w,
            },
            domain,
            tol,
        )
        .map(|r| r.value)
    };
    let mean = against(&|x| v(x))?;
    let second = against(&|x| v(x).powi(2))?;
    let var = against(&|x| (v(x) - mean).powi(2))?;
    if !(var > 1e-14 * second) {
        return Err(Error::ZeroVariance);
    }
    let energy = against(&|x| dv(x).powi(2))?;
    Ok(energy / var)
}

/// Relative weighted-L^2 distance between the computed eigenvector and
/// `model` sampled at the nodes, after the optimal scalar rescaling of
/// `model`. Lies in `[0, 1]`.
pub fn eigenfunction_compare(result: &SpectralResult, model: impl Fn(f64) -> f64) -> f64 {
    let u = &result.eigenvector;
    let mu = &result.measure_weights;
    let g: Vec<f64> = result.grid.nodes().into_iter().map(model).collect();
    let dot = |a: &[f64], b: &[f64]| -> f64 {
        mu.iter().zip(a).zip(b).map(|((m, x), y)| m * x * y).sum()
    };
    let (uu, ug, gg) = (dot(u, u), dot(u, &g), dot(&g, &g));
    if gg == 0.0 {
        return 1.0;
    }
    let c = ug / gg;
    let diff: Vec<f64> = u.iter().zip(&g).map(|(a, b)| a - c * b).collect();
    (dot(&diff, &diff) / uu).sqrt().min(1.0)
}

/// One row of a grid-refinement study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub h: f64,
    pub lambda1: f64,
    pub error: f64,
    /// Empirical order against the previous (coarser) row.
    pub order: Option<f64>,
}

/// `lambda_1` on grids of `ns` nodes over a fixed half-width, with errors
/// against `reference`.
pub fn convergence_study(
    line: &WeightedLine,
    half_width: f64,
    ns: &[usize],
    reference: f64,
) -> Result<Vec<ConvergenceRow>> {
    let mut sorted = ns.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let results: Vec<(Grid1D, f64)> = sorted
        .par_iter()
        .map(|&n| {
            let grid = Grid1D::new(line, half_width, n)?;
            Ok((grid, first_nonzero_eigenvalue(line, &grid)?.lambda1))
        })
        .collect::<Result<_>>()?;
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(results.len());
    for (grid, lambda1) in results {
        let error = (lambda1 - reference).abs();
        let order = rows
            .last()
            .map(|prev| (prev.error / error).ln() / (prev.h / grid.h).ln());
        rows.push(ConvergenceRow {
            n: grid.n,
            h: grid.h,
            lambda1,
            error,
            order,
        });
    }
    Ok(rows)
}

//! Grid certification that finite-diameter model profiles strictly exceed
//! their infinite-diameter counterparts.

use rayon::prelude::*;
use serde::Serialize;

use crate::numerics::MinimumSource;
use crate::profiles::{AppendixGaps, GaussianModel};
use crate::{ModelParams, Result};

pub const DEFAULT_NS: [f64; 3] = [-2.0, -5.0, -10.0];
pub const DEFAULT_DS: [f64; 4] = [0.5, 1.0, 2.0, 5.0];

/// `0.05, 0.10, ..., 0.95`.
pub fn default_thetas() -> Vec<f64> {
    (1..=19).map(|i| i as f64 / 20.0).collect()
}

/// One `(K, N, D, theta)` cell of the negative-dimension certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AppendixCell {
    pub k: f64,
    pub n: f64,
    pub d: f64,
    pub theta: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub i_inf: f64,
    pub min_gap: f64,
    /// Lower bound `K3(1)` for the `K3` gap.
    pub h3_floor: f64,
    pub k1_source: MinimumSource,
    pub k2_source: MinimumSource,
}

impl AppendixCell {
    pub fn passes(&self) -> bool {
        self.min_gap > 0.0
    }
}

/// One `(K, D, theta)` cell of the Gaussian certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianCell {
    pub k: f64,
    pub d: f64,
    pub theta: f64,
    pub i_d: f64,
    pub i_inf: f64,
    pub gap: f64,
    pub xi_star: f64,
}

impl GaussianCell {
    pub fn passes(&self) -> bool {
        self.gap > 0.0
    }
}

pub fn certify_cell(k: f64, n: f64, d: f64, theta: f64) -> Result<AppendixCell> {
    let gaps = AppendixGaps::new(&ModelParams::negative(k, n)?, d)?;
    let model = gaps.model();
    let i_inf = model.profile(theta)?;
    let k1 = model.k1(d, theta)?;
    let k2 = model.k2(d, theta)?;
    let k3 = model.k3(d, theta);
    let min_gap = (k1.value - i_inf).min(k2.value - i_inf).min(k3 - i_inf);
    Ok(AppendixCell {
        k,
        n,
        d,
        theta,
        k1: k1.value,
        k2: k2.value,
        k3,
        i_inf,
        min_gap,
        h3_floor: gaps.h3_floor(),
        k1_source: k1.source,
        k2_source: k2.source,
    })
}

/// Evaluates every cell of `ns x ds x thetas` in parallel; cells come back
/// in lexicographic `(N, D, theta)` order of the inputs.
pub fn certify_negative(k: f64, ns: &[f64], ds: &[f64], thetas: &[f64]) -> Result<Vec<AppendixCell>> {
    let cells: Vec<(f64, f64, f64)> = ns
        .iter()
        .flat_map(|&n| ds.iter().flat_map(move |&d| thetas.iter().map(move |&t| (n, d, t))))
        .collect();
    cells
        .par_iter()
        .map(|&(n, d, t)| certify_cell(k, n, d, t))
        .collect()
}

pub fn certify_gaussian(k: f64, ds: &[f64], thetas: &[f64]) -> Result<Vec<GaussianCell>> {
    let model = GaussianModel::new(k)?;
    let cells: Vec<(f64, f64)> = ds
        .iter()
        .flat_map(|&d| thetas.iter().map(move |&t| (d, t)))
        .collect();
    cells
        .par_iter()
        .map(|&(d, theta)| {
            let i_inf = model.profile(theta)?;
            let p = model.profile_diameter(d, theta)?;
            Ok(GaussianCell {
                k,
                d,
                theta,
                i_d: p.value,
                i_inf,
                gap: p.value - i_inf,
                xi_star: p.xi_star,
            })
        })
        .collect()
}

//! Model isoperimetric profiles `I_(K,N,D)` for `N = inf` or `N < 0`.
//!
//! * `N = inf`, `D = inf`: Gaussian profile.
//! * `N = inf`, `D < inf`: infimum over windows `[xi, xi + D]`, `xi` in `[-D, 0]`.
//! * `N < 0`, `D = inf`: cosh model `cosh^{N-1}(sqrt(sigma) t) / m_{K,N}`.
//! * `N < 0`, `D < inf`: minimum of the cosh-window (`K1`), sinh-window
//!   (`K2`) and exponential (`K3`) branches.
//!
//! The needle densities `J_H`, the balancing slope `H_theta` and the gap
//! functions used to certify strict dominance live here as well.

mod appendix;
mod fixed_point;
mod gaussian;
mod negative;
pub(crate) mod special;
mod window;

pub use appendix::{appendix_gap_functions, AppendixGaps, GapRecord};
pub use fixed_point::{fixed_point, fixed_point_h, needle_density, FixedPoint, NeedleDensityParams};
pub use gaussian::{
    gaussian_density, profile_gauss_d, profile_gauss_inf, GaussianDiameterProfile, GaussianModel,
};
pub use negative::{model_mass_neg, profile_neg_d, profile_neg_inf, CoshModel, NegDiameterProfile};

use rayon::prelude::*;
use serde::Serialize;

use crate::numerics::ToleranceConfig;
use crate::{Diameter, Dimension, Error, ModelParams, Result};

/// Which formula produced a profile value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProfileBranch {
    GaussInf,
    GaussD,
    NegInf,
    K1,
    K2,
    K3,
}

impl ProfileBranch {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProfileBranch::GaussInf => "GaussInf",
            ProfileBranch::GaussD => "GaussD",
            ProfileBranch::NegInf => "NegInf",
            ProfileBranch::K1 => "K1",
            ProfileBranch::K2 => "K2",
            ProfileBranch::K3 => "K3",
        }
    }
}

/// Per-point diagnostics of a profile evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileDiagnostics {
    pub branch: ProfileBranch,
    pub xi_star: Option<f64>,
    pub h_theta: Option<f64>,
}

/// A profile sampled on a sorted theta grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileCurve {
    pub params: ModelParams,
    pub thetas: Vec<f64>,
    pub values: Vec<f64>,
    pub diagnostics: Vec<ProfileDiagnostics>,
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < 1.0 {
        Ok(())
    } else {
        Err(Error::ThetaOutOfRange(theta))
    }
}

/// Tolerances used by the model computations: tighter than the numerics
/// defaults so that derived quantities keep about 1e-11 accuracy.
pub(crate) fn model_tolerance() -> ToleranceConfig {
    ToleranceConfig {
        abs_tol: 1e-14,
        rel_tol: 1e-13,
        max_evals: 200_000,
    }
}

/// Evaluates `I_(K,N,D)(theta)` for any supported parameter combination.
///
/// `H_theta` is reported for unbounded diameters, where the profile is the
/// boundary value of the balanced needle density.
pub fn profile_point(params: &ModelParams, theta: f64) -> Result<(f64, ProfileDiagnostics)> {
    check_theta(theta)?;
    let diag = |branch, xi_star, h_theta| ProfileDiagnostics {
        branch,
        xi_star,
        h_theta,
    };
    match (params.dimension(), params.diameter()) {
        (Dimension::Infinite, Diameter::Unbounded) => {
            let v = profile_gauss_inf(params.k(), theta)?;
            let h = fixed_point_h(params, theta)?;
            Ok((v, diag(ProfileBranch::GaussInf, None, Some(h))))
        }
        (Dimension::Infinite, Diameter::Finite(d)) => {
            let (v, xi) = profile_gauss_d(params.k(), d, theta)?;
            Ok((v, diag(ProfileBranch::GaussD, Some(xi), None)))
        }
        (Dimension::Negative(_), Diameter::Unbounded) => {
            let v = profile_neg_inf(params, theta)?;
            let h = fixed_point_h(params, theta)?;
            Ok((v, diag(ProfileBranch::NegInf, None, Some(h))))
        }
        (Dimension::Negative(_), Diameter::Finite(d)) => {
            let p = profile_neg_d(params, d, theta)?;
            Ok((p.value, diag(p.branch, p.xi_star, None)))
        }
    }
}

/// Samples the profile on `thetas` in parallel; output is sorted by theta.
pub fn profile_curve(params: &ModelParams, thetas: &[f64]) -> Result<ProfileCurve> {
    let mut thetas = thetas.to_vec();
    thetas.sort_by(f64::total_cmp);
    thetas.dedup();
    let points: Vec<(f64, ProfileDiagnostics)> = thetas
        .par_iter()
        .map(|&t| profile_point(params, t))
        .collect::<Result<_>>()?;
    let (values, diagnostics) = points.into_iter().unzip();
    Ok(ProfileCurve {
        params: *params,
        thetas,
        values,
        diagnostics,
    })
}

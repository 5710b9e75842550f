use std::fs;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::ValueEnum;
use isoprofile_core::certify::{certify_gaussian, certify_negative};
use isoprofile_core::needle::{
    halfline_profile, reduce_to_halfline, rigidity_detect, MinimizerReport, RigidityReport,
    WeightedLine,
};
use isoprofile_core::numerics::central_difference;
use isoprofile_core::profiles::{profile_curve, CoshModel, GaussianModel};
use isoprofile_core::spectral::{
    convergence_study, eigenfunction_compare, first_nonzero_eigenvalue, rayleigh_quotient, Grid1D,
};
use isoprofile_core::warped::{
    grid_eps_boundary, halfspace_boundary, measure, mixed_excess, GridMesh, MixedExcess, SetSpec,
    WarpedProduct,
};
use isoprofile_core::{Diameter, Dimension, Error, ModelParams};
use serde::Serialize;
use serde_json::{json, Value};

use crate::output::{emit, float, json as to_json, json_number, opt_float, Format, Table};
use crate::{Cli, Command, Model};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Density {
    Gaussian,
    Cosh,
    Exp,
    Table,
}

/// Whether every requested certification held.
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            Outcome::Pass => ExitCode::SUCCESS,
            Outcome::Fail => ExitCode::from(1),
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

/// 2 for rejected inputs, 3 for numerical failures.
pub fn error_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Parameter(_) | Error::ThetaOutOfRange(_) | Error::Table { .. }) => 2,
        Some(_) => 3,
        None if err.downcast_ref::<std::io::Error>().is_some() => 2,
        None => 3,
    }
}

fn n_json(n: Dimension) -> Value {
    match n {
        Dimension::Infinite => json!("inf"),
        Dimension::Negative(x) => json!(x),
    }
}

fn params_json(p: &ModelParams) -> Value {
    let d = match p.diameter() {
        Diameter::Unbounded => json!("inf"),
        Diameter::Finite(x) => json!(x),
    };
    json!({ "K": p.k(), "N": n_json(p.dimension()), "D": d })
}

pub fn run(cli: Cli) -> Result<Outcome> {
    let (text, outcome) = match cli.command {
        Command::Profile { model, d, thetas } => profile(&model, d, &thetas, cli.format)?,
        Command::VerifyAppendix {
            k,
            ns,
            ds,
            thetas,
            gaussian,
        } => {
            if gaussian {
                verify_gaussian(k, &ds, &thetas, cli.format)?
            } else {
                verify_negative(k, &ns, &ds, &thetas, cli.format)?
            }
        }
        Command::Needle {
            density,
            model,
            d,
            gamma,
            scale,
            table,
            thetas,
            set,
            rigidity,
        } => {
            let line = build_line(density, &model, d, gamma, scale, table.as_deref())?;
            needle(&line, &model, &thetas, set.as_ref(), rigidity, cli.format)?
        }
        Command::Spectral {
            model,
            nodes,
            half_width,
        } => spectral(&model, &nodes, half_width, cli.format)?,
        Command::Warped {
            model,
            theta,
            q1,
            b,
            n_t,
            n_fiber,
            eps,
            circumference,
        } => warped(
            &model,
            WarpedArgs {
                theta,
                q1,
                b,
                n_t,
                n_fiber,
                eps,
                circumference,
            },
            cli.format,
        )?,
        Command::DerivativeCheck { model, thetas, tol } => {
            derivative_check(&model, &thetas, tol, cli.format)?
        }
    };
    emit(&text, cli.output.as_deref())?;
    Ok(outcome)
}

fn profile(model: &Model, d: Diameter, thetas: &[f64], format: Format) -> Result<(String, Outcome)> {
    let params = ModelParams::new(model.k, model.n, d)?;
    let curve = profile_curve(&params, thetas)?;
    let text = match format {
        Format::Csv => {
            let mut t = Table::new(&["theta", "value", "branch", "xi_star", "H_theta"]);
            for ((theta, value), diag) in curve.thetas.iter().zip(&curve.values).zip(&curve.diagnostics) {
                t.push(vec![
                    float(*theta),
                    float(*value),
                    diag.branch.as_str().into(),
                    opt_float(diag.xi_star),
                    opt_float(diag.h_theta),
                ]);
            }
            t.render()
        }
        Format::Json => {
            let rows: Vec<Value> = curve
                .thetas
                .iter()
                .zip(&curve.values)
                .zip(&curve.diagnostics)
                .map(|((theta, value), diag)| {
                    json!({
                        "theta": theta,
                        "value": value,
                        "branch": diag.branch.as_str(),
                        "xi_star": diag.xi_star,
                        "H_theta": diag.h_theta,
                    })
                })
                .collect();
            to_json(&json!({ "params": params_json(&params), "rows": rows }))?
        }
    };
    Ok((text, Outcome::Pass))
}

fn report_failures<T>(cells: &[T], passes: impl Fn(&T) -> bool, describe: impl Fn(&T) -> String) -> bool {
    let mut ok = true;
    for cell in cells.iter().filter(|c| !passes(c)) {
        eprintln!("FAIL {}", describe(cell));
        ok = false;
    }
    ok
}

fn verify_negative(k: f64, ns: &[f64], ds: &[f64], thetas: &[f64], format: Format) -> Result<(String, Outcome)> {
    let cells = certify_negative(k, ns, ds, thetas)?;
    let ok = report_failures(
        &cells,
        |c| c.passes(),
        |c| format!("K={} N={} D={} theta={} min_gap={}", c.k, c.n, c.d, c.theta, float(c.min_gap)),
    );
    if let Some(worst) = cells.iter().min_by(|a, b| a.min_gap.total_cmp(&b.min_gap)) {
        eprintln!(
            "{} cells, minimum gap {} at N={} D={} theta={}",
            cells.len(),
            float(worst.min_gap),
            worst.n,
            worst.d,
            worst.theta
        );
    }
    let text = match format {
        Format::Csv => {
            let mut t = Table::new(&[
                "K", "N", "D", "theta", "K1", "K2", "K3", "I_inf", "min_gap", "h3_floor", "K1_source",
                "K2_source", "pass",
            ]);
            for c in &cells {
                t.push(vec![
                    float(c.k),
                    float(c.n),
                    float(c.d),
                    float(c.theta),
                    float(c.k1),
                    float(c.k2),
                    float(c.k3),
                    float(c.i_inf),
                    float(c.min_gap),
                    float(c.h3_floor),
                    format!("{:?}", c.k1_source),
                    format!("{:?}", c.k2_source),
                    c.passes().to_string(),
                ]);
            }
            t.render()
        }
        Format::Json => to_json(&json!({ "all_pass": ok, "cells": cells }))?,
    };
    Ok((text, Outcome::from_bool(ok)))
}

fn verify_gaussian(k: f64, ds: &[f64], thetas: &[f64], format: Format) -> Result<(String, Outcome)> {
    let cells = certify_gaussian(k, ds, thetas)?;
    let ok = report_failures(
        &cells,
        |c| c.passes(),
        |c| format!("K={} D={} theta={} gap={}", c.k, c.d, c.theta, float(c.gap)),
    );
    if let Some(worst) = cells.iter().min_by(|a, b| a.gap.total_cmp(&b.gap)) {
        eprintln!("{} cells, minimum gap {} at D={} theta={}", cells.len(), float(worst.gap), worst.d, worst.theta);
    }
    let text = match format {
        Format::Csv => {
            let mut t = Table::new(&["K", "D", "theta", "I_D", "I_inf", "gap", "xi_star", "pass"]);
            for c in &cells {
                t.push(vec![
                    float(c.k),
                    float(c.d),
                    float(c.theta),
                    float(c.i_d),
                    float(c.i_inf),
                    float(c.gap),
                    float(c.xi_star),
                    c.passes().to_string(),
                ]);
            }
            t.render()
        }
        Format::Json => to_json(&json!({ "all_pass": ok, "cells": cells }))?,
    };
    Ok((text, Outcome::from_bool(ok)))
}

fn negative_n(model: &Model, what: &str) -> Result<f64> {
    match model.n {
        Dimension::Negative(n) => Ok(n),
        Dimension::Infinite => Err(anyhow!(Error::Parameter(format!("{what} needs a negative --N")))),
    }
}

fn build_line(
    density: Density,
    model: &Model,
    d: Option<f64>,
    gamma: f64,
    scale: f64,
    table: Option<&std::path::Path>,
) -> Result<WeightedLine> {
    Ok(match density {
        Density::Gaussian => WeightedLine::gaussian(model.k)?,
        Density::Cosh => WeightedLine::cosh_model(model.k, negative_n(model, "the cosh density")?, gamma, scale)?,
        Density::Exp => {
            let d = d.ok_or_else(|| Error::Parameter("the exponential density needs --D".into()))?;
            WeightedLine::exp_model(model.k, negative_n(model, "the exponential density")?, d)?
        }
        Density::Table => {
            let path = table.ok_or_else(|| Error::Parameter("the table density needs --table".into()))?;
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            WeightedLine::from_table(&text)?
        }
    })
}

#[derive(Serialize)]
struct ReportRow {
    theta: Option<f64>,
    set: String,
    mass: f64,
    boundary: f64,
    profile_value: f64,
    is_halfline: bool,
}

impl ReportRow {
    fn new(theta: Option<f64>, r: &MinimizerReport) -> Self {
        Self {
            theta,
            set: r.set.to_string(),
            mass: r.mass,
            boundary: r.boundary,
            profile_value: r.profile_value,
            is_halfline: r.is_halfline,
        }
    }
}

fn needle(
    line: &WeightedLine,
    model: &Model,
    thetas: &[f64],
    set: Option<&isoprofile_core::needle::IntervalUnion>,
    rigidity: bool,
    format: Format,
) -> Result<(String, Outcome)> {
    let halflines = thetas
        .iter()
        .map(|&t| Ok(ReportRow::new(Some(t), &halfline_profile(line, t)?)))
        .collect::<Result<Vec<_>>>()?;
    let model_values: Vec<Option<f64>> = thetas
        .iter()
        .map(|&t| match model.n {
            Dimension::Infinite => GaussianModel::new(model.k).and_then(|m| m.profile(t)).ok(),
            Dimension::Negative(n) => CoshModel::from_kn(model.k, n).and_then(|m| m.profile(t)).ok(),
        })
        .collect();
    let trajectory = set
        .map(|s| reduce_to_halfline(line, s))
        .transpose()?
        .map(|steps| steps.iter().map(|r| ReportRow::new(None, r)).collect::<Vec<_>>());
    let rigidity: Option<RigidityReport> = rigidity.then(|| rigidity_detect(line, model.k, model.n)).transpose()?;

    let text = match format {
        Format::Csv => {
            let mut t = Table::new(&["kind", "step", "theta", "set", "mass", "boundary", "profile_value", "model_profile", "is_halfline"]);
            for (row, m) in halflines.iter().zip(&model_values) {
                t.push(vec![
                    "halfline".into(),
                    String::new(),
                    opt_float(row.theta),
                    format!("\"{}\"", row.set),
                    float(row.mass),
                    float(row.boundary),
                    float(row.profile_value),
                    opt_float(*m),
                    row.is_halfline.to_string(),
                ]);
            }
            for (i, row) in trajectory.iter().flatten().enumerate() {
                t.push(vec![
                    "reduction".into(),
                    i.to_string(),
                    String::new(),
                    format!("\"{}\"", row.set),
                    float(row.mass),
                    float(row.boundary),
                    float(row.profile_value),
                    String::new(),
                    row.is_halfline.to_string(),
                ]);
            }
            if let Some(r) = &rigidity {
                // Rigidity is not tabular; it goes to the error stream in CSV mode.
                eprintln!("rigidity: matches_model={} residual={} fit={:?}", r.matches_model, float(r.residual), r.fit);
            }
            t.render()
        }
        Format::Json => to_json(&json!({
            "halfline": halflines,
            "model_profile": model_values,
            "reduction": trajectory,
            "rigidity": rigidity,
        }))?,
    };
    Ok((text, Outcome::Pass))
}

fn spectral_line(model: &Model) -> Result<(WeightedLine, ModelParams)> {
    match model.n {
        Dimension::Infinite => Ok((WeightedLine::gaussian(model.k)?, ModelParams::gaussian(model.k)?)),
        Dimension::Negative(n) => Ok((
            WeightedLine::cosh_model(model.k, n, 0.0, 1.0)?,
            ModelParams::negative(model.k, n)?,
        )),
    }
}

fn spectral(model: &Model, ns: &[usize], half_width: Option<f64>, format: Format) -> Result<(String, Outcome)> {
    if ns.is_empty() {
        bail!(Error::Parameter("--n needs at least one node count".into()));
    }
    let (line, params) = spectral_line(model)?;
    let coarsest = *ns.iter().min().expect("non-empty");
    let half_width = match half_width {
        Some(l) => l,
        None => -Grid1D::auto(&line, &params, coarsest)?.lo,
    };
    let reference = params.spectral_gap();
    let rows = convergence_study(&line, half_width, ns, reference)?;

    // Model eigenfunction: t for the Gaussian, sinh(sqrt(sigma) t) otherwise.
    let s = params.sigma().map(f64::sqrt);
    let eigenfunction = move |t: f64| s.map_or(t, |s| (s * t).sinh());
    let derivative = move |t: f64| s.map_or(1.0, |s| s * (s * t).cosh());
    let finest = *ns.iter().max().expect("non-empty");
    let result = first_nonzero_eigenvalue(&line, &Grid1D::new(&line, half_width, finest)?)?;
    let distance = eigenfunction_compare(&result, eigenfunction);
    let model_rayleigh = rayleigh_quotient(&line, eigenfunction, derivative)?;

    let text = match format {
        Format::Csv => {
            let mut t = Table::new(&["n", "h", "lambda1", "reference", "error", "order"]);
            for r in &rows {
                t.push(vec![
                    r.n.to_string(),
                    float(r.h),
                    float(r.lambda1),
                    float(reference),
                    float(r.error),
                    opt_float(r.order),
                ]);
            }
            t.render()
        }
        Format::Json => to_json(&json!({
            "params": params_json(&params),
            "half_width": half_width,
            "reference": reference,
            "rows": rows,
            "finest": {
                "n": finest,
                "lambda1": result.lambda1,
                "rayleigh": result.rayleigh,
                "residual": result.residual,
                "eigenfunction_distance": distance,
            },
            "model_eigenfunction_rayleigh": model_rayleigh,
        }))?,
    };
    Ok((text, Outcome::Pass))
}

struct WarpedArgs {
    theta: f64,
    q1: f64,
    b: Option<f64>,
    n_t: usize,
    n_fiber: usize,
    eps: Option<f64>,
    circumference: f64,
}

#[derive(Serialize)]
struct WarpedReport {
    params: Value,
    fiber_circumference: f64,
    theta: f64,
    q1: f64,
    r: f64,
    r_bar: f64,
    mixed_measure: f64,
    halfspace_boundary: f64,
    excess: MixedExcess,
    n_t: usize,
    n_fiber: usize,
    eps: f64,
    grid_halfspace: f64,
    grid_mixed: f64,
    grid_margin: f64,
    certified: bool,
}

fn warped(model: &Model, a: WarpedArgs, format: Format) -> Result<(String, Outcome)> {
    let params = ModelParams::negative(model.k, negative_n(model, "the warped product")?)?;
    let space = WarpedProduct::new(&params, a.circumference)?;
    let set = SetSpec::mixed_at_mass(&space, a.q1, a.theta)?;
    let SetSpec::Mixed { r, r_bar, .. } = set else { unreachable!("mixed_at_mass builds a mixed set") };
    let excess = mixed_excess(&space, &set, a.b.unwrap_or(r - 1.0))?;
    let mesh = GridMesh::for_space(&space, a.n_t, a.n_fiber)?;
    let half = SetSpec::HalfSpace { r };
    let eps = a.eps.unwrap_or_else(|| mesh.min_eps(&space, &set).max(mesh.min_eps(&space, &half)));
    let (grid_halfspace, grid_mixed) = rayon::join(
        || grid_eps_boundary(&space, &mesh, &half, eps),
        || grid_eps_boundary(&space, &mesh, &set, eps),
    );
    let (grid_halfspace, grid_mixed) = (grid_halfspace?, grid_mixed?);
    let boundary = halfspace_boundary(&space, r);
    let certified = excess.strict_excess > 0.0 && grid_mixed > boundary;
    let report = WarpedReport {
        params: params_json(&params),
        fiber_circumference: a.circumference,
        theta: a.theta,
        q1: a.q1,
        r,
        r_bar,
        mixed_measure: measure(&space, &set)?,
        halfspace_boundary: boundary,
        excess,
        n_t: a.n_t,
        n_fiber: a.n_fiber,
        eps,
        grid_halfspace,
        grid_mixed,
        grid_margin: grid_mixed - boundary,
        certified,
    };
    let text = match format {
        Format::Csv => {
            let mut t = Table::new(&[
                "theta", "q1", "r", "r_bar", "halfspace_boundary", "strict_excess", "eps", "grid_halfspace",
                "grid_mixed", "grid_margin", "certified",
            ]);
            t.push(vec![
                float(report.theta),
                float(report.q1),
                float(r),
                float(r_bar),
                float(boundary),
                float(excess.strict_excess),
                float(eps),
                float(grid_halfspace),
                float(grid_mixed),
                float(report.grid_margin),
                certified.to_string(),
            ]);
            t.render()
        }
        Format::Json => to_json(&report)?,
    };
    if !certified {
        eprintln!("FAIL theta={} q1={} strict_excess={} grid_margin={}", a.theta, a.q1, float(excess.strict_excess), float(report.grid_margin));
    }
    Ok((text, Outcome::from_bool(certified)))
}

#[derive(Serialize)]
struct DerivativeRow {
    theta: f64,
    closed_form: f64,
    finite_difference: f64,
    abs_error: f64,
    pass: bool,
}

fn derivative_check(model: &Model, thetas: &[f64], tol: f64, format: Format) -> Result<(String, Outcome)> {
    enum Profile {
        Gauss(GaussianModel),
        Cosh(CoshModel),
    }
    let profile = match model.n {
        Dimension::Infinite => Profile::Gauss(GaussianModel::new(model.k)?),
        Dimension::Negative(n) => Profile::Cosh(CoshModel::from_kn(model.k, n)?),
    };
    let value = |t: f64| match &profile {
        Profile::Gauss(m) => m.profile(t),
        Profile::Cosh(m) => m.profile(t),
    };
    let rows = thetas
        .iter()
        .map(|&theta| {
            let closed_form = match &profile {
                Profile::Gauss(m) => m.profile_derivative(theta)?,
                Profile::Cosh(m) => m.profile_derivative(theta)?,
            };
            let finite_difference = central_difference(|t| value(t).unwrap_or(f64::NAN), theta);
            let abs_error = (finite_difference - closed_form).abs();
            Ok(DerivativeRow {
                theta,
                closed_form,
                finite_difference,
                abs_error,
                pass: abs_error <= tol,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ok = report_failures(&rows, |r| r.pass, |r| format!("theta={} abs_error={}", r.theta, float(r.abs_error)));
    let text = match format {
        Format::Csv => {
            let mut t = Table::new(&["theta", "closed_form", "finite_difference", "abs_error", "pass"]);
            for r in &rows {
                t.push(vec![
                    float(r.theta),
                    float(r.closed_form),
                    float(r.finite_difference),
                    float(r.abs_error),
                    r.pass.to_string(),
                ]);
            }
            t.render()
        }
        Format::Json => to_json(&json!({
            "N": n_json(model.n),
            "K": model.k,
            "tolerance": json_number(tol),
            "rows": rows,
        }))?,
    };
    Ok((text, Outcome::from_bool(ok)))
}

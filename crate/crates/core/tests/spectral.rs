use isoprofile_core::needle::WeightedLine;
use isoprofile_core::spectral::{
    assemble_weighted_laplacian, convergence_study, eigenfunction_compare,
    first_nonzero_eigenvalue, rayleigh_quotient, Grid1D,
};
use isoprofile_core::{Error, ModelParams};
use proptest::prelude::*;

fn cosh_line() -> WeightedLine {
    // K = 1, N = -2: density cosh(x / sqrt 3)^{-3}.
    WeightedLine::cosh_model(1.0, -2.0, 0.0, 1.0).unwrap()
}

#[test]
fn gaussian_gap_is_k() {
    let line = WeightedLine::gaussian(1.0).unwrap();
    let grid = Grid1D::new(&line, 8.0, 2001).unwrap();
    let r = first_nonzero_eigenvalue(&line, &grid).unwrap();
    assert!((r.lambda1 - 1.0).abs() < 1e-4, "lambda1 = {}", r.lambda1);
    assert!((r.rayleigh - r.lambda1).abs() < 1e-8);
    assert!(eigenfunction_compare(&r, |x| x) <= 1e-4);
}

#[test]
fn gaussian_gap_scales_with_k() {
    let line = WeightedLine::gaussian(2.5).unwrap();
    let grid = Grid1D::new(&line, 6.0, 2001).unwrap();
    let r = first_nonzero_eigenvalue(&line, &grid).unwrap();
    assert!((r.lambda1 - 2.5).abs() < 1e-3);
}

#[test]
fn cosh_model_gap_is_kn_over_n_minus_one() {
    let line = cosh_line();
    let grid = Grid1D::new(&line, 40.0, 4001).unwrap();
    let r = first_nonzero_eigenvalue(&line, &grid).unwrap();
    assert!((r.lambda1 - 2.0 / 3.0).abs() < 1e-3, "lambda1 = {}", r.lambda1);
    let s = 1.0 / 3.0f64.sqrt();
    assert!(eigenfunction_compare(&r, |x| (s * x).sinh()) <= 1e-3);
}

#[test]
fn eigenvector_is_mean_zero_and_normalized() {
    let line = cosh_line();
    let grid = Grid1D::new(&line, 40.0, 1001).unwrap();
    let r = first_nonzero_eigenvalue(&line, &grid).unwrap();
    let mean: f64 = r.eigenvector.iter().zip(&r.measure_weights).map(|(u, m)| u * m).sum();
    let norm: f64 = r.eigenvector.iter().zip(&r.measure_weights).map(|(u, m)| u * u * m).sum();
    assert!(mean.abs() <= 1e-10);
    assert!((norm - 1.0).abs() < 1e-10);
    assert!(*r.eigenvector.last().unwrap() >= 0.0);
}

#[test]
fn second_order_convergence_on_the_cosh_model() {
    let rows = convergence_study(&cosh_line(), 40.0, &[501, 1001, 2001, 4001], 2.0 / 3.0).unwrap();
    assert_eq!(rows.len(), 4);
    for w in rows.windows(2) {
        assert!(w[1].error < w[0].error);
        assert!(w[1].order.unwrap() >= 1.8, "order {:?}", w[1].order);
    }
}

#[test]
fn sinh_rayleigh_quotient_is_exact() {
    let s = 1.0 / 3.0f64.sqrt();
    let q = rayleigh_quotient(&cosh_line(), |x| (s * x).sinh(), |x| s * (s * x).cosh()).unwrap();
    assert!((q - 2.0 / 3.0).abs() < 1e-8, "q = {q}");
}

#[test]
fn linear_rayleigh_quotient_on_the_gaussian() {
    let line = WeightedLine::gaussian(3.0).unwrap();
    let q = rayleigh_quotient(&line, |x| x, |_| 1.0).unwrap();
    assert!((q - 3.0).abs() < 1e-10);
}

#[test]
fn constants_have_zero_variance() {
    let err = rayleigh_quotient(&cosh_line(), |_| 4.0, |_| 0.0).unwrap_err();
    assert_eq!(err, Error::ZeroVariance);
}

#[test]
fn short_grid_reports_required_width() {
    let line = WeightedLine::gaussian(1.0).unwrap();
    match Grid1D::new(&line, 3.0, 101).unwrap_err() {
        Error::TailTooHeavy {
            tail_mass,
            required_half_width,
        } => {
            // Two-sided Gaussian tail beyond 3 is 2.7e-3; the 1e-8 quantile is near 5.73.
            assert!((tail_mass - 2.6997960632601913e-3).abs() < 1e-9);
            assert!((required_half_width - 5.7307).abs() < 1e-3);
            assert!(Grid1D::new(&line, required_half_width + 1e-9, 101).is_ok());
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn too_few_nodes_are_refused() {
    let line = WeightedLine::gaussian(1.0).unwrap();
    assert!(matches!(Grid1D::new(&line, 8.0, 15), Err(Error::Parameter(_))));
}

#[test]
fn auto_grid_matches_the_model_gap() {
    let params = ModelParams::negative(1.0, -2.0).unwrap();
    let grid = Grid1D::auto(&cosh_line(), &params, 4001).unwrap();
    let r = first_nonzero_eigenvalue(&cosh_line(), &grid).unwrap();
    assert!((r.lambda1 - params.spectral_gap()).abs() < 1e-3);
    let bad = ModelParams::negative(1.0, -0.5).unwrap();
    assert!(Grid1D::auto(&cosh_line(), &bad, 101).is_err());
}

#[test]
fn operator_annihilates_constants_and_differentiates_linear_functions() {
    let line = WeightedLine::gaussian(1.0).unwrap();
    let grid = Grid1D::new(&line, 8.0, 801).unwrap();
    let op = assemble_weighted_laplacian(&line, &grid);
    assert!(op.apply(&vec![1.0; 801]).iter().all(|v| v.abs() < 1e-9));
    // Delta_m x = -psi'(x) = -x away from the Neumann ends.
    let x = grid.nodes();
    let lx = op.apply(&x);
    // Truncation error is h^2 |w'''/w| / 24 <= 1e-3 on [-4, 4].
    for i in 200..=600 {
        assert!((lx[i] + x[i]).abs() < 1e-3);
    }
}

#[test]
fn poincare_inequality_holds_for_random_test_functions() {
    // Deterministic pseudo-random trigonometric polynomials via a LCG.
    let line = cosh_line();
    let gap = 2.0 / 3.0;
    let mut state: u64 = 0x2545_f491_4f6c_dd1d;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    for _ in 0..20 {
        let coeffs: Vec<(f64, f64)> = (0..4).map(|_| (next(), 0.2 + next().abs())).collect();
        let c1 = coeffs.clone();
        let v = move |x: f64| c1.iter().map(|(a, w)| a * (w * x).sin() + 0.3 * a * (w * x).cos()).sum::<f64>();
        let dv = move |x: f64| {
            coeffs
                .iter()
                .map(|(a, w)| a * w * (w * x).cos() - 0.3 * a * w * (w * x).sin())
                .sum::<f64>()
        };
        let q = rayleigh_quotient(&line, v, dv).unwrap();
        assert!(q >= gap - 1e-8, "q = {q}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn discrete_green_identity(coef in prop::collection::vec(-2.0f64..2.0, 6)) {
        let line = cosh_line();
        let grid = Grid1D::new(&line, 40.0, 201).unwrap();
        let op = assemble_weighted_laplacian(&line, &grid);
        let x = grid.nodes();
        let u: Vec<f64> = x.iter().map(|t| coef[0] * (0.3 * t).sin() + coef[1] * t + coef[2]).collect();
        let v: Vec<f64> = x.iter().map(|t| coef[3] * (0.1 * t).cos() + coef[4] * t * t + coef[5]).collect();
        let lhs = -op.inner(&op.apply(&u), &v);
        let rhs = op.dirichlet_form(&u, &v);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()));
        let sym = -op.inner(&u, &op.apply(&v));
        prop_assert!((sym - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()));
    }

    #[test]
    fn discrete_rayleigh_bounded_below_by_lambda1(coef in prop::collection::vec(-1.0f64..1.0, 4)) {
        let line = WeightedLine::gaussian(1.0).unwrap();
        let grid = Grid1D::new(&line, 7.0, 301).unwrap();
        let r = first_nonzero_eigenvalue(&line, &grid).unwrap();
        let op = assemble_weighted_laplacian(&line, &grid);
        let x = grid.nodes();
        let mut u: Vec<f64> = x.iter().map(|t| coef[0] * t + coef[1] * t * t + coef[2] * (t).sin() + coef[3] * t.powi(3)).collect();
        let m = op.mean(&u);
        u.iter_mut().for_each(|a| *a -= m);
        let var = op.inner(&u, &u);
        prop_assume!(var > 1e-8);
        prop_assert!(op.dirichlet_form(&u, &u) / var >= r.lambda1 * (1.0 - 1e-9));
    }
}

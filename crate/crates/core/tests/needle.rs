use std::f64::consts::PI;

use isoprofile_core::needle::{
    brute_force_minimizer, convexity_check, halfline_profile, halfline_value, left_shift,
    reduce_to_halfline, reduce_with_limit, right_shift, rigidity_detect, Component,
    IntervalUnion, Potential, RigidityFit, ShiftOutcome, Term, WeightedLine,
};
use isoprofile_core::numerics::Interval;
use isoprofile_core::profiles::CoshModel;
use isoprofile_core::{Dimension, Error};
use proptest::prelude::*;

const INF: f64 = f64::INFINITY;

fn cosh_line() -> WeightedLine {
    WeightedLine::cosh_model(1.0, -2.0, 0.0, 1.0).unwrap()
}

fn model_profile(theta: f64) -> f64 {
    CoshModel::from_kn(1.0, -2.0).unwrap().profile(theta).unwrap()
}

/// Model potential plus extra analytic terms.
fn perturbed(extra: Vec<Term>) -> WeightedLine {
    let mut terms = vec![Term::LogCosh {
        amplitude: 3.0,
        rate: (1.0f64 / 3.0).sqrt(),
        shift: 0.0,
    }];
    terms.extend(extra);
    WeightedLine::new(Potential::Terms(terms), Interval::real_line()).unwrap()
}

fn asymmetric_line() -> WeightedLine {
    WeightedLine::new(
        Potential::Terms(vec![
            Term::Polynomial(vec![0.0, 1.5, 0.5]),
            Term::LogCosh {
                amplitude: 0.5,
                rate: 1.0,
                shift: 0.0,
            },
        ]),
        Interval::real_line(),
    )
    .unwrap()
}

#[test]
fn measure_examples() {
    let g = WeightedLine::gaussian(1.0).unwrap();
    assert!((g.measure(&IntervalUnion::whole_line()).unwrap() - 1.0).abs() < 1e-10);
    let left = IntervalUnion::left_half_line(0.0).unwrap();
    assert!((g.measure(&left).unwrap() - 0.5).abs() < 1e-12);
    let c = cosh_line();
    let q = CoshModel::from_kn(1.0, -2.0).unwrap().quantile(0.3).unwrap();
    let set = IntervalUnion::left_half_line(q).unwrap();
    assert!((c.measure(&set).unwrap() - 0.3).abs() < 1e-10);
}

#[test]
fn boundary_measure_examples() {
    let k = 2.0;
    let g = WeightedLine::gaussian(k).unwrap();
    assert_eq!(g.boundary_measure(&IntervalUnion::whole_line()), 0.0);
    let left = IntervalUnion::left_half_line(0.0).unwrap();
    assert!((g.boundary_measure(&left) - (k / (2.0 * PI)).sqrt()).abs() < 1e-13);
}

#[test]
fn boundary_measure_matches_dilation_oracle() {
    let g = WeightedLine::gaussian(1.0).unwrap();
    let set = IntervalUnion::new(&[(-1.2, -0.3), (0.4, 1.7)]).unwrap();
    let m0 = g.measure(&set).unwrap();
    let dilate = |eps: f64| {
        let grown = IntervalUnion::new(&[(-1.2 - eps, -0.3 + eps), (0.4 - eps, 1.7 + eps)]).unwrap();
        (g.measure(&grown).unwrap() - m0) / eps
    };
    // Richardson extrapolation of the one-sided difference quotient.
    let (e1, e2) = (1e-3, 5e-4);
    let oracle = 2.0 * dilate(e2) - dilate(e1);
    let direct = g.boundary_measure(&set);
    let four: f64 = [-1.2, -0.3, 0.4, 1.7].iter().map(|&x| g.density(x)).sum();
    assert!((direct - four).abs() < 1e-15);
    assert!((direct - oracle).abs() < 1e-6);
}

#[test]
fn halfline_examples() {
    let k = 1.5;
    let g = WeightedLine::gaussian(k).unwrap();
    let r = halfline_profile(&g, 0.5).unwrap();
    assert!((r.boundary - (k / (2.0 * PI)).sqrt()).abs() < 1e-12);
    assert!(r.is_halfline);
    let c = r.set.components()[0];
    assert!(c.lo == -INF && c.hi.abs() < 1e-10);

    let line = cosh_line();
    for &theta in &[0.1, 0.25, 0.5, 0.8] {
        let r = halfline_profile(&line, theta).unwrap();
        assert!((r.boundary - model_profile(theta)).abs() < 1e-8);
        assert!((r.mass - theta).abs() < 1e-10);
    }
}

#[test]
fn asymmetric_line_takes_the_smaller_half_line() {
    let line = asymmetric_line();
    let theta = 0.3;
    let a = line.lower_quantile(theta).unwrap();
    let b = line.upper_quantile(theta).unwrap();
    let (left, right) = (line.density(a), line.density(b));
    assert!((left - right).abs() > 1e-3);
    let r = halfline_profile(&line, theta).unwrap();
    assert_eq!(r.boundary, left.min(right));
}

#[test]
fn non_log_concave_input_is_refused() {
    let bimodal = WeightedLine::new(
        Potential::Terms(vec![Term::Polynomial(vec![0.0, 0.0, -2.0, 0.0, 0.5])]),
        Interval::real_line(),
    )
    .unwrap();
    assert!(matches!(
        halfline_profile(&bimodal, 0.5),
        Err(Error::NotLogConcave { .. })
    ));
}

#[test]
fn right_shift_preserves_mass_and_lowers_boundary() {
    let g = WeightedLine::gaussian(1.0).unwrap();
    let c = Component::new(-1.0, 1.0).unwrap();
    let before = g.mass_between(-1.0, 1.0).unwrap();
    let ShiftOutcome::Moved(s) = right_shift(&g, c, 0.1).unwrap() else {
        panic!("unexpected escape")
    };
    assert!((s.lo - (-0.9)).abs() < 1e-15);
    let g_eps = s.hi - 1.0;
    assert!(g_eps > 0.1);
    assert!((g.mass_between(s.lo, s.hi).unwrap() - before).abs() < 1e-10);
    let old_b = g.density(-1.0) + g.density(1.0);
    assert!(g.density(s.lo) + g.density(s.hi) < old_b);

    let off = Component::new(0.2, 1.0).unwrap();
    let ShiftOutcome::Moved(s) = right_shift(&g, off, 0.1).unwrap() else {
        panic!("unexpected escape")
    };
    // Moving away from the mode needs a longer step on the far side.
    assert!(s.hi - 1.0 > 0.1);
    assert!(g.density(s.lo) + g.density(s.hi) < g.density(0.2) + g.density(1.0));
}

#[test]
fn left_shift_mirrors_right_shift() {
    let line = cosh_line();
    let c = Component::new(0.3, 1.4).unwrap();
    let r = right_shift(&line, c, 0.2).unwrap().component();
    let l = left_shift(&line, Component::new(-1.4, -0.3).unwrap(), 0.2)
        .unwrap()
        .component();
    assert!((l.lo + r.hi).abs() < 1e-10 && (l.hi + r.lo).abs() < 1e-10);
}

#[test]
fn shift_escapes_into_the_tail() {
    let g = WeightedLine::gaussian(1.0).unwrap();
    let c = Component::new(6.0, 6.5).unwrap();
    let out = right_shift(&g, c, 2.0).unwrap();
    let ShiftOutcome::Escaped(t) = out else {
        panic!("expected escape")
    };
    assert_eq!(t.hi, INF);
    assert!((g.upper_mass(t.lo).unwrap() - g.mass_between(6.0, 6.5).unwrap()).abs() < 1e-12);
}

fn check_trajectory(line: &WeightedLine, set: &IntervalUnion) -> Vec<f64> {
    let traj = reduce_to_halfline(line, set).unwrap();
    let m0 = traj[0].mass;
    for w in traj.windows(2) {
        assert!((w[1].mass - m0).abs() < 1e-10, "mass drift {}", w[1].mass - m0);
        assert!(w[1].boundary <= w[0].boundary + 1e-12);
    }
    let last = traj.last().unwrap();
    assert!(last.is_halfline);
    assert!((last.boundary - halfline_value(line, m0).unwrap()).abs() < 1e-9);
    traj.iter().map(|r| r.boundary).collect()
}

#[test]
fn reduction_of_two_intervals() {
    let g = WeightedLine::gaussian(1.0).unwrap();
    let set = IntervalUnion::new(&[(0.0, 1.0), (2.0, 3.0)]).unwrap();
    let b = check_trajectory(&g, &set);
    assert!(b.last().unwrap() < &b[0]);
    assert!(b.len() > 2);
}

#[test]
fn reduction_of_a_half_line_is_the_identity() {
    let g = WeightedLine::gaussian(1.0).unwrap();
    let set = IntervalUnion::left_half_line(0.4).unwrap();
    let traj = reduce_to_halfline(&g, &set).unwrap();
    assert_eq!(traj.len(), 1);
    assert_eq!(traj[0].set, set);
}

#[test]
fn reduction_through_the_complement() {
    let g = WeightedLine::gaussian(1.0).unwrap();
    let set = IntervalUnion::new(&[(-INF, -1.0), (1.0, INF)]).unwrap();
    let traj = reduce_to_halfline(&g, &set).unwrap();
    assert!(traj[1].set.is_two_tails());
    check_trajectory(&g, &set);
    let on_cosh = IntervalUnion::new(&[(-INF, -2.0), (-0.5, 0.3), (1.0, INF)]).unwrap();
    check_trajectory(&cosh_line(), &on_cosh);
}

#[test]
fn reduction_step_limit_reports_the_trajectory() {
    let g = WeightedLine::gaussian(1.0).unwrap();
    let set = IntervalUnion::new(&[(0.0, 1.0), (2.0, 3.0)]).unwrap();
    match reduce_with_limit(&g, &set, 3) {
        Err(Error::StepLimit { limit, trajectory }) => {
            assert_eq!(limit, 3);
            assert_eq!(trajectory.len(), 4);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn reduction_needs_symmetry() {
    let set = IntervalUnion::new(&[(0.0, 1.0)]).unwrap();
    assert!(reduce_to_halfline(&asymmetric_line(), &set).is_err());
}

#[test]
fn brute_force_finds_half_lines() {
    let g = WeightedLine::gaussian(1.0).unwrap();
    let r = brute_force_minimizer(&g, 0.3, 2, 200).unwrap();
    assert!(r.is_halfline, "{}", r.set);
    assert!(r.boundary >= r.profile_value - 1e-12);
    assert!((r.mass - 0.3).abs() < 0.03);
    assert!((r.boundary - halfline_value(&g, r.mass).unwrap()).abs() < 1e-10);

    let r = brute_force_minimizer(&cosh_line(), 0.5, 2, 201).unwrap();
    let c = r.set.components();
    assert!(r.is_halfline);
    let cut = if c[0].lo == -INF { c[0].hi } else { c[0].lo };
    assert!(cut.abs() < 0.2);
}

#[test]
fn brute_force_on_a_multimodal_density_avoids_half_lines() {
    // Three bumps with the central one carrying half the mass: cutting out
    // the central bump beats every half-line of mass 1/2.
    let trimodal = WeightedLine::new(
        Potential::custom(|x: f64| {
            let bump = |c: f64| (-2.0 * (x - c) * (x - c)).exp();
            -(0.25 * bump(-3.0) + 0.5 * bump(0.0) + 0.25 * bump(3.0)).ln()
        }),
        Interval::real_line(),
    )
    .unwrap();
    let r = brute_force_minimizer(&trimodal, 0.5, 2, 300).unwrap();
    assert!(!r.is_halfline, "{}", r.set);
    assert!(r.boundary < 0.5 * halfline_value(&trimodal, r.mass).unwrap());
    assert!(matches!(
        halfline_profile(&trimodal, 0.5),
        Err(Error::NotLogConcave { .. })
    ));
}

#[test]
fn convexity_examples() {
    let k = 1.3;
    let g = WeightedLine::gaussian(k).unwrap();
    let rep = convexity_check(&g, k, Dimension::Infinite);
    assert!(rep.holds && rep.margin.abs() < 1e-12);
    let rep = convexity_check(&cosh_line(), 1.0, Dimension::Negative(-2.0));
    assert!(rep.holds && rep.margin.abs() < 1e-12);
    let quartic = WeightedLine::new(Potential::custom(|x: f64| x.powi(4)), Interval::real_line()).unwrap();
    assert!(!convexity_check(&quartic, 0.1, Dimension::Infinite).holds);
}

#[test]
fn rigidity_examples() {
    let rep = rigidity_detect(&cosh_line(), 1.0, Dimension::Negative(-2.0)).unwrap();
    assert!(rep.matches_model && rep.residual <= 1e-10);
    let Some(RigidityFit::Cosh { k, gamma, .. }) = rep.fit else {
        panic!("no fit")
    };
    assert!((k - 1.0).abs() < 1e-12 && gamma.abs() < 1e-12);

    let shifted = WeightedLine::cosh_model(1.0, -2.0, 0.5, 1.0).unwrap();
    let rep = rigidity_detect(&shifted, 1.0, Dimension::Negative(-2.0)).unwrap();
    let Some(RigidityFit::Cosh { gamma, .. }) = rep.fit else {
        panic!("no fit")
    };
    assert!(rep.matches_model && (gamma - 0.5).abs() < 1e-10);

    let wiggle = perturbed(vec![Term::Sine {
        amplitude: 0.05,
        frequency: 1.0,
        phase: 0.0,
    }]);
    let rep = rigidity_detect(&wiggle, 1.0, Dimension::Negative(-2.0)).unwrap();
    assert!(!rep.matches_model);
    assert!(halfline_value(&wiggle, 0.5).unwrap() > model_profile(0.5));

    let g = WeightedLine::new(
        Potential::Terms(vec![Term::Polynomial(vec![0.3, -0.8, 1.0])]),
        Interval::real_line(),
    )
    .unwrap();
    let rep = rigidity_detect(&g, 2.0, Dimension::Infinite).unwrap();
    assert!(rep.matches_model);
    assert_eq!(rep.fit, Some(RigidityFit::Gaussian { shift: 0.4 }));
    assert!(rigidity_detect(&cosh_line(), 1.0, Dimension::Negative(-0.5)).is_err());
}

#[test]
fn unnormalizable_fit_is_reported() {
    // Large slope at the origin: f_N'(0) / sqrt(sigma) exceeds f_N(0).
    let tilted = perturbed(vec![Term::Sine {
        amplitude: 2.0,
        frequency: 1.0,
        phase: 0.0,
    }]);
    let rep = rigidity_detect(&tilted, 1.0, Dimension::Negative(-2.0)).unwrap();
    assert!(!rep.matches_model && rep.fit.is_none() && rep.diagnostic.is_some());
}

#[test]
fn tabulated_potential_round_trip() {
    let mut text = String::from("# x psi\n");
    for i in 0..=400 {
        let x = -8.0 + 0.04 * i as f64;
        text.push_str(&format!("{x} {}\n", 0.5 * x * x));
    }
    let line = WeightedLine::from_table(&text).unwrap();
    let exact = WeightedLine::gaussian(1.0).unwrap();
    for &theta in &[0.2, 0.5, 0.7] {
        let a = halfline_value(&line, theta).unwrap();
        let b = halfline_value(&exact, theta).unwrap();
        assert!((a - b).abs() < 1e-5);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn convex_perturbations_respect_the_model_bound(
        c2 in 0.0f64..0.3, c4 in 0.0f64..0.02, theta in 0.1f64..0.9
    ) {
        let line = perturbed(vec![Term::Polynomial(vec![0.0, 0.0, c2, 0.0, c4])]);
        prop_assert!(convexity_check(&line, 1.0, Dimension::Negative(-2.0)).holds);
        prop_assert!(halfline_value(&line, theta).unwrap() >= model_profile(theta) - 1e-6);
    }

    #[test]
    fn shifts_preserve_mass(a in -2.0f64..1.5, w in 0.1f64..2.0, eps in 0.01f64..0.5) {
        let g = WeightedLine::gaussian(1.0).unwrap();
        let c = Component::new(a, a + w).unwrap();
        let m = g.mass_between(c.lo, c.hi).unwrap();
        let out = right_shift(&g, c, eps).unwrap().component();
        prop_assert!((g.mass_between(out.lo, out.hi).unwrap() - m).abs() < 1e-10);
    }
}

use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn isoprofile(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isoprofile"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    stdout(out)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).unwrap()
}

#[test]
fn symmetric_profile_table() {
    let out = isoprofile(&["profile", "--K", "1", "--N", "-2", "--D", "inf", "--thetas", "0.1:0.9:0.1"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("theta,value,branch,xi_star,H_theta\n"));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 9);
    let values: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    for i in 0..9 {
        assert!((values[i] - values[8 - i]).abs() < 1e-12);
    }
    assert!((values[4] - 2.0 / (3.0f64.sqrt() * PI)).abs() < 1e-12);
}

#[test]
fn gaussian_diameter_profile_single_row() {
    let out = isoprofile(&["profile", "--K", "1", "--N", "inf", "--D", "2", "--thetas", "0.5"]);
    assert!(out.status.success());
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][2], "GaussD");
    // 1 / int_{-1}^{1} e^{-s^2/2} ds = 1 / (sqrt(2 pi) erf(1/sqrt 2)).
    let value: f64 = rows[0][1].parse().unwrap();
    assert!((value - 0.5843685672568).abs() < 1e-9);
}

#[test]
fn default_diameter_is_unbounded() {
    let out = isoprofile(&["profile", "--K", "1", "--N", "-2", "--thetas", "0.5", "--format", "json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["params"]["D"], "inf");
    let value = v["rows"][0]["value"].as_f64().unwrap();
    assert!((value - 0.36755).abs() < 1e-5);
}

#[test]
fn csv_floats_carry_seventeen_digits() {
    let out = isoprofile(&["profile", "--K", "1", "--N", "-2", "--thetas", "0.5"]);
    let rows = csv_rows(&out);
    assert_eq!(rows[0][0], "0.50000000000000000");
    assert_eq!(rows[0][1].len(), "0.36755259694786135".len());
}

#[test]
fn default_appendix_grid_certifies() {
    let out = isoprofile(&["verify-appendix"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 3 * 4 * 19);
    assert!(rows.iter().all(|r| r[12] == "true"));
    assert!(rows.iter().all(|r| r[8].parse::<f64>().unwrap() > 0.0));
}

#[test]
fn endpoint_cell_clears_the_exponential_floor() {
    let out = isoprofile(&[
        "verify-appendix", "--Ns", "-2", "--Ds", "1", "--thetas", "0.99", "--format", "json",
    ]);
    assert!(out.status.success());
    let cell = &json(&out)["cells"][0];
    let k3_gap = cell["k3"].as_f64().unwrap() - cell["i_inf"].as_f64().unwrap();
    assert!(k3_gap >= cell["h3_floor"].as_f64().unwrap());
    assert!(cell["min_gap"].as_f64().unwrap() > 0.0);
}

#[test]
fn gaussian_certificate() {
    let out = isoprofile(&["verify-appendix", "--gaussian", "--format", "json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["cells"].as_array().unwrap().len(), 4 * 19);
}

#[test]
fn needle_rigidity_on_the_cosh_model() {
    let out = isoprofile(&["needle", "--density", "cosh", "--K", "1", "--N", "-2", "--rigidity", "--format", "json"]);
    assert!(out.status.success());
    let v = json(&out);
    let r = &v["rigidity"];
    assert_eq!(r["matches_model"], true);
    let fit = &r["fit"]["Cosh"];
    assert!((fit["k"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert!(fit["gamma"].as_f64().unwrap().abs() < 1e-8);
    assert_eq!(v["halfline"][0]["is_halfline"], true);
}

#[test]
fn needle_reduction_trajectory() {
    let out = isoprofile(&["needle", "--set", "-1:0,1:2", "--format", "json"]);
    assert!(out.status.success());
    let steps = json(&out)["reduction"].as_array().unwrap().clone();
    let first = steps[0]["mass"].as_f64().unwrap();
    let last = steps.last().unwrap();
    assert_eq!(last["is_halfline"], true);
    assert!((last["mass"].as_f64().unwrap() - first).abs() < 1e-10);
    for w in steps.windows(2) {
        assert!(w[1]["boundary"].as_f64().unwrap() <= w[0]["boundary"].as_f64().unwrap() + 1e-12);
    }
}

#[test]
fn tabulated_density_from_file() {
    let dir = std::env::temp_dir().join(format!("isoprofile-table-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("psi.txt");
    let mut text = String::from("# x psi\n");
    for i in 0..=400 {
        let x = -10.0 + 0.05 * i as f64;
        text.push_str(&format!("{x} {}\n", 0.5 * x * x));
    }
    std::fs::write(&path, text).unwrap();
    let out = isoprofile(&["needle", "--density", "table", "--table", path.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let value = json(&out)["halfline"][0]["profile_value"].as_f64().unwrap();
    assert!((value - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-4);
}

#[test]
fn spectral_table_converges() {
    let out = isoprofile(&["spectral", "--K", "1", "--N", "-2", "--n", "2001,4001", "--format", "json"]);
    assert!(out.status.success());
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    let last = rows[1]["lambda1"].as_f64().unwrap();
    assert!((last - 2.0 / 3.0).abs() < 1e-3);
    assert!(rows[1]["error"].as_f64().unwrap() < rows[0]["error"].as_f64().unwrap());
    assert!((v["model_eigenfunction_rayleigh"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-8);
}

#[test]
fn warped_certificate() {
    let out = isoprofile(&["warped", "--K", "1", "--N", "-2", "--theta", "0.5", "--q1", "0.5", "--format", "json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert!(v["excess"]["strict_excess"].as_f64().unwrap() > 0.0);
    assert_eq!(v["certified"], true);
}

#[test]
fn derivative_check_passes_and_fails_on_tolerance() {
    let ok = isoprofile(&["derivative-check", "--K", "1", "--N", "-2"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(csv_rows(&ok).len(), 3);
    let gauss = isoprofile(&["derivative-check", "--K", "2", "--N", "inf"]);
    assert_eq!(gauss.status.code(), Some(0));
    let strict = isoprofile(&["derivative-check", "--K", "1", "--N", "-2", "--tol", "1e-20"]);
    assert_eq!(strict.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&strict.stderr).contains("FAIL theta="));
}

#[test]
fn invalid_inputs_exit_with_usage_code() {
    for args in [
        &["profile", "--K", "-1"][..],
        &["profile", "--N", "3"],
        &["profile", "--thetas", "0.5,0.2"],
        &["profile", "--thetas", "0:1:0.5"],
        &["warped", "--N", "inf"],
        &["needle", "--density", "exp", "--N", "-2"],
        &["bogus"],
    ] {
        let out = isoprofile(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn output_is_reproducible_and_written_to_file() {
    let dir = std::env::temp_dir().join(format!("isoprofile-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.csv");
    let b = dir.join("b.csv");
    let base = ["verify-appendix", "--Ns", "-2,-5", "--Ds", "1,2", "--thetas", "0.1:0.9:0.2"];
    let run = |path: &std::path::Path, threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_isoprofile"))
            .args(base)
            .args(["--output", path.to_str().unwrap()])
            .env("ISOPROFILE_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
    };
    run(&a, "1");
    run(&b, "4");
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!ta.is_empty());
    assert_eq!(ta, tb);
    assert!(!ta.contains(&b'\r'));
}

#[test]
fn bad_thread_cap_is_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_isoprofile"))
        .args(["profile", "--thetas", "0.5"])
        .env("ISOPROFILE_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

use std::f64::consts::PI;
use std::process::{Command, Output};
use std::sync::Arc;

use num_complex::Complex64;
use pwlab_core::certify::CertifyReport;
use pwlab_core::{kernel_spectral, make_grid, KernelPoint, SigmaBand};
use serde_json::Value;

fn pwlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pwlab"))
        .args(args)
        .env_remove("PWLAB_GOLDEN")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = pwlab(args);
    let code = out.status.code().unwrap();
    (code, serde_json::from_str(&stdout(&out)).unwrap_or(Value::Null))
}

fn certificate<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["certificates"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no certificate {name}"))
}

/// Rows of the `n,node,re,im` block.
fn orbit_rows(text: &str) -> Vec<(usize, f64, Complex64)> {
    let block = text.split("\n\n").next().unwrap();
    block
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (
                f[0].parse().unwrap(),
                f[1].parse().unwrap(),
                Complex64::new(f[2].parse().unwrap(), f[3].parse().unwrap()),
            )
        })
        .collect()
}

fn residual_table(text: &str) -> Vec<f64> {
    let table = text.split("\n\n").nth(1).unwrap();
    assert!(table.starts_with("N,residual\n"));
    table
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn classify_examples() {
    let (code, v) = json(&["classify", "--sigma", "3.14159265", "--a", "1", "--b", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["cyclic"], true);
    let (_, v) = json(&["classify", "--sigma", "3.14159265", "--a", "0.5", "--b", "1"]);
    assert_eq!(v["cyclic"], false);
    assert_eq!(v["adjoint_cyclic"], true);
    let (code, v) = json(&["classify", "--a", "2", "--b", "0", "--sigma", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["bounded"], false);
    assert_eq!(v["eps_real"], 1e-12);
    for key in [
        "bounded",
        "cyclic",
        "adjoint_cyclic",
        "supercyclic",
        "complex_symmetric",
        "normal",
        "self_adjoint",
        "unitary",
        "kernels_all_cyclic",
        "rule_citations",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn classify_text_and_csv() {
    let out = pwlab(&[
        "classify", "--sigma", "pi", "--a", "0.5", "--b", "0", "--output", "text",
    ]);
    assert!(stdout(&out).contains("not complex symmetric:"));
    let out = pwlab(&["classify", "--sigma", "pi", "--a", "1", "--b", "i", "--output", "csv"]);
    let text = stdout(&out);
    assert!(text.starts_with("field,value\n"));
    assert!(text.contains("kernels_all_cyclic,all\n"));
    assert!(text.contains("self_adjoint,true\n"));
}

#[test]
fn pi_literals_hit_the_threshold() {
    let (_, at) = json(&["classify", "--sigma", "pi", "--a", "1", "--b", "1", "--eps-real", "0"]);
    assert_eq!(at["cyclic"], true);
    assert_eq!(at["kernels_all_cyclic"], "none");
    let (_, past) = json(&["classify", "--sigma", "2pi", "--a", "1", "--b", "1"]);
    assert_eq!(past["cyclic"], false);
    let (_, half) = json(&["classify", "--sigma", "pi/2", "--a", "-1", "--b", "3,0"]);
    assert_eq!(half["unitary"], true);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["classify", "--sigma", "1", "--a", "1", "--b", "1+"],
        vec!["classify", "--sigma", "1", "--a", "1+2i", "--b", "0"],
        vec!["classify", "--sigma", "-1", "--a", "1", "--b", "0"],
        vec!["certify", "--sigma", "1", "--a", "2", "--b", "0"],
        vec![
            "matrix",
            "--sigma",
            "1",
            "--a",
            "1",
            "--b",
            "0",
            "--basis-m",
            "16",
            "--grid",
            "64",
        ],
        vec![
            "orbit",
            "--sigma",
            "1",
            "--a",
            "1",
            "--b",
            "0",
            "--seed-file",
            "/nonexistent/seed.csv",
        ],
        vec!["classify", "--sigma", "1"],
    ] {
        let out = pwlab(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn certify_critical_shift() {
    let (code, v) = json(&["certify", "--sigma", "pi", "--a", "1", "--b", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["consistent"], true);
    let k = certificate(&v, "kernel_orbit");
    assert!((k["residual"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert_eq!(k["verdict"], "fail");
    assert_eq!(k["expected"], "fail");
    assert_eq!(certificate(&v, "operator_orbit")["verdict"], "pass");
    assert!(k["params"]["gram_condition"].is_number());
}

#[test]
fn certify_reflections() {
    let (code, v) = json(&["certify", "--a", "-1", "--b", "i", "--sigma", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["consistent"], true);
    let n = certificate(&v, "normality");
    assert_eq!(n["verdict"], "fail");
    assert_eq!(n["expected"], "fail");
    assert!(n["residual"].as_f64().unwrap() >= 0.1);
    assert_eq!(certificate(&v, "j_symmetry")["verdict"], "pass");

    let (code, v) = json(&["certify", "--a", "-1", "--b", "0", "--sigma", "1"]);
    assert_eq!(code, 0);
    assert_eq!(certificate(&v, "unitarity")["verdict"], "pass");
}

#[test]
fn certify_report_round_trips() {
    let out = pwlab(&["certify", "--sigma", "1", "--a", "0.5", "--b", "1"]);
    let text = stdout(&out);
    let report: CertifyReport = serde_json::from_str(&text).unwrap();
    report.classification.validate().unwrap();
    for c in &report.certificates {
        c.validate().unwrap();
    }
    assert_eq!(report.consistent, report.certificates.iter().all(|c| c.is_consistent()));
    let again = serde_json::to_string_pretty(&report).unwrap() + "\n";
    assert_eq!(again, text);
}

#[test]
fn reports_are_byte_identical() {
    for args in [
        ["certify", "--sigma", "pi", "--a", "1", "--b", "0.5"],
        ["orbit", "--sigma", "pi", "--a", "1", "--b", "0.5"],
    ] {
        let a = pwlab(&args).stdout;
        let b = pwlab(&args).stdout;
        assert!(!a.is_empty());
        assert_eq!(a, b);
    }
}

#[test]
fn golden_override_changes_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("golden.txt");
    // a threshold above the orthogonal residual turns the expected
    // obstruction into a pass, which the battery must flag
    std::fs::write(&path, "# v1\nkernel_orbit 10 256 2.0\noperator_orbit 10 256 0.75\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_pwlab"))
        .args(["certify", "--sigma", "pi", "--a", "1", "--b", "1"])
        .env("PWLAB_GOLDEN", &path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["consistent"], false);
    assert_eq!(certificate(&v, "kernel_orbit")["threshold"], 2.0);

    let out = Command::new(env!("CARGO_BIN_EXE_pwlab"))
        .args(["certify", "--sigma", "pi", "--a", "1", "--b", "1"])
        .env("PWLAB_GOLDEN", dir.path().join("missing.txt"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn orbit_of_critical_shift_is_exponentials() {
    let out = pwlab(&[
        "orbit",
        "--sigma",
        "pi",
        "--a",
        "1",
        "--b",
        "1",
        "--seed-kernel",
        "0",
        "--orbit-n",
        "6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows = orbit_rows(&text);
    assert_eq!(rows.len(), 7 * 256);
    for (n, t, v) in rows {
        let expected = Complex64::new(0.0, n as f64 * t).exp();
        assert!((v - expected).norm() < 1e-12);
    }
    // the default target k_{1/2} is not orthogonal to the orbit
    let table = residual_table(&text);
    assert_eq!(table.len(), 6);
    assert!(table.windows(2).all(|w| w[1] <= w[0] + 1e-12));
}

#[test]
fn adjoint_orbit_of_contraction_tracks_fixed_point() {
    let out = pwlab(&[
        "orbit",
        "--sigma",
        "pi",
        "--a",
        "0.5",
        "--b",
        "1",
        "--seed-kernel",
        "0",
        "--adjoint",
        "--orbit-n",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut w = 0.0f64;
    for n in 0..=8 {
        for &(_, t, v) in orbit_rows(&text).iter().filter(|r| r.0 == n) {
            let expected = Complex64::new(0.0, -w * t).exp();
            assert!((v - expected).norm() < 1e-12, "n={n}");
        }
        w = 0.5 * w + 1.0;
    }
    assert!((w - 2.0).abs() < 1e-2);
    // nearly collinear kernels: monotone at dyadic N, flat at the
    // regularisation floor in between
    let table = residual_table(&text);
    let dyadic: Vec<f64> = [1, 2, 4, 8].iter().map(|&n| table[n - 1]).collect();
    assert!(dyadic.windows(2).all(|w| w[1] < w[0]), "{table:?}");
}

#[test]
fn orbit_from_seed_file() {
    let band = SigmaBand::new(PI).unwrap();
    let grid = Arc::new(make_grid(band, 256).unwrap());
    let seed = kernel_spectral(KernelPoint::real(0.25), &grid);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("seed.csv");
    std::fs::write(&path, seed.to_csv()).unwrap();
    let from_file = pwlab(&[
        "orbit",
        "--sigma",
        "pi",
        "--a",
        "1",
        "--b",
        "0.5",
        "--orbit-n",
        "4",
        "--seed-file",
        path.to_str().unwrap(),
    ]);
    let from_kernel = pwlab(&[
        "orbit",
        "--sigma",
        "pi",
        "--a",
        "1",
        "--b",
        "0.5",
        "--orbit-n",
        "4",
        "--seed-kernel",
        "0.25",
    ]);
    assert_eq!(from_file.status.code(), Some(0));
    let (a, b) = (orbit_rows(&stdout(&from_file)), orbit_rows(&stdout(&from_kernel)));
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert!((x.2 - y.2).norm() < 1e-12);
    }

    // a file sampled on another grid is rejected
    let coarse = Arc::new(make_grid(band, 64).unwrap());
    std::fs::write(&path, kernel_spectral(KernelPoint::real(0.0), &coarse).to_csv()).unwrap();
    let out = pwlab(&[
        "orbit",
        "--sigma",
        "pi",
        "--a",
        "1",
        "--b",
        "0.5",
        "--seed-file",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

fn matrix_entries(args: &[&str]) -> Vec<(usize, usize, Complex64)> {
    let out = pwlab(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}");
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("row,col,re,im"));
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (
                f[0].parse().unwrap(),
                f[1].parse().unwrap(),
                Complex64::new(f[2].parse().unwrap(), f[3].parse().unwrap()),
            )
        })
        .collect()
}

#[test]
fn matrix_patterns() {
    let check = |args: &[&str], expected: &dyn Fn(usize, usize) -> f64| {
        let entries = matrix_entries(args);
        assert_eq!(entries.len(), 81);
        for (r, c, v) in entries {
            assert!((v - expected(r, c)).norm() < 1e-9, "{args:?} ({r},{c}) = {v}");
        }
    };
    let base = ["matrix", "--sigma", "pi", "--basis-m", "4", "--grid", "64"];
    let with = |extra: &[&'static str]| base.iter().copied().chain(extra.iter().copied()).collect::<Vec<_>>();
    let delta = |p: bool| if p { 1.0 } else { 0.0 };
    check(&with(&["--a", "1", "--b", "1"]), &|r, c| delta(r == c + 1));
    check(&with(&["--a", "1", "--b", "1", "--adjoint"]), &|r, c| delta(c == r + 1));
    check(&with(&["--a", "1", "--b", "0"]), &|r, c| delta(r == c));
    check(&with(&["--a", "-1", "--b", "0"]), &|r, c| delta(r + c == 8));
}

#[test]
fn matrix_json_is_complete() {
    let (code, v) = json(&[
        "matrix",
        "--sigma",
        "1",
        "--a",
        "-1",
        "--b",
        "i",
        "--basis-m",
        "2",
        "--grid",
        "32",
        "--output",
        "json",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["dim"], 5);
    assert_eq!(v["entries"].as_array().unwrap().len(), 25);
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde_json::Value;
use tempfile::TempDir;

use trimdist::cli::read_curve;
use trimdist::{
    compose_gamma, directional_derivative_lipschitz, empirical_cdf, gaussian_trimmed_distance, sup_norm_distance,
    DistributionSpec, GridFunction,
};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trimdist")).args(args).output().expect("binary runs")
}

fn run_json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn run_error(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    assert!(out.stdout.is_empty());
    let err: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    (out.status.code().unwrap(), err)
}

fn write_sample(dir: &Path, name: &str, n: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let law = Normal::new(1.0, 1.0).unwrap();
    let mut text = String::from("value\n");
    for _ in 0..n {
        text.push_str(&format!("{}\n", law.sample(&mut rng)));
    }
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn write_curve_rows(dir: &Path, name: &str, f: impl Fn(f64) -> f64, m: usize) -> String {
    let mut text = String::from("t,value\n");
    for i in 0..m {
        let t = i as f64 / (m - 1) as f64;
        text.push_str(&format!("{t},{}\n", f(t)));
    }
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn gaussian_zero_band() {
    let v = run_json(&["gaussian", "--mu", "0", "--sigma", "1.05", "--alpha", "0.1"]);
    assert_eq!(v["distance"], 0.0);
    assert_eq!(v["regime"], "ScaleInBand");
}

#[test]
fn gaussian_location_shift_with_negative_mu() {
    let v = run_json(&["gaussian", "--mu", "-1", "--sigma", "1", "--alpha", "0.1"]);
    let (want, case) = gaussian_trimmed_distance(-1.0, 1.0, 0.1).unwrap();
    assert_eq!(v["distance"].as_f64().unwrap(), want);
    assert_eq!(v["regime"], "LocationShift");
    assert_eq!(v["t_a"].as_f64(), case.t_a);
    assert!(v["t_b"].is_null());
}

#[test]
fn identical_laws() {
    let v = run_json(&["distance", "--f0", "normal:0,1", "--f", "normal:0,1", "--alpha", "0"]);
    assert_eq!(v["distance"], 0.0);
    assert_eq!(v["alpha"], 0.0);
    assert_eq!(v["grid"], 100_000);
    assert!(v["n"].is_null());
}

#[test]
fn sample_distance_is_close_to_closed_form() {
    let dir = TempDir::new().unwrap();
    let path = write_sample(dir.path(), "sample.csv", 10_000, 17);
    let spec = format!("csv:{path}");
    let v = run_json(&["distance", "--f0", "normal:0,1", "--f", &spec, "--alpha", "0.1"]);
    let (closed, _) = gaussian_trimmed_distance(1.0, 1.0, 0.1).unwrap();
    assert!((v["distance"].as_f64().unwrap() - closed).abs() <= 0.05);
    assert_eq!(v["n"], 10_000);
    assert!(v["grid"].is_null());
}

#[test]
fn grid_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_trimdist"))
        .args(["distance", "--f0", "normal:0,1", "--f", "normal:1,1", "--alpha", "0.1"])
        .env("TRIMDIST_GRID", "2001")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["grid"], 2001);
}

#[test]
fn output_is_deterministic() {
    let args = ["distance", "--f0", "normal:0,1", "--f", "mixture:normal:0,1,normal:4,1,0.2", "--alpha", "0.15"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn emitted_curves_reproduce_the_distance() {
    let dir = TempDir::new().unwrap();
    let sample = write_sample(dir.path(), "s.csv", 500, 3);
    let h_path = dir.path().join("h.csv");
    let h = h_path.to_string_lossy().into_owned();
    let spec = format!("csv:{sample}");
    let v = run_json(&["distance", "--f0", "normal:0,1", "--f", &spec, "--alpha", "0.2", "--emit-h", &h]);
    let d = v["distance"].as_f64().unwrap();

    let values: Vec<f64> = fs::read_to_string(&sample).unwrap().lines().skip(1).map(|l| l.parse().unwrap()).collect();
    let gamma =
        compose_gamma(&DistributionSpec::normal(0.0, 1.0).unwrap(), &empirical_cdf(&values).unwrap(), 0).unwrap();
    let h_opt = read_curve(&h_path).unwrap();
    assert!((sup_norm_distance(&h_opt, &gamma) - d).abs() <= 1e-9);
    assert_eq!(h_opt.eval(0.0), 0.0);
    assert_eq!(h_opt.eval(1.0), 1.0);

    let h_tilde = read_curve(&dir.path().join("h_tilde.csv")).unwrap();
    let g = gamma.add_linear(-1.0 / 0.8);
    assert!((sup_norm_distance(&h_tilde, &g) - d).abs() <= 1e-9);
}

#[test]
fn alpha_min_on_a_mixture() {
    let v = run_json(&[
        "alpha-min",
        "--f0",
        "normal:0,1",
        "--f",
        "mixture:normal:0,1,normal:5,1,0.3",
        "--threshold",
        "1e-6",
        "--grid",
        "20001",
    ]);
    let a = v["alpha_hat"].as_f64().unwrap();
    assert!((0.25..=0.31).contains(&a), "{a}");
    assert!(v["iterations"].as_u64().unwrap() > 0);
}

#[test]
fn envelope_csv() {
    let dir = TempDir::new().unwrap();
    let input = write_curve_rows(dir.path(), "f.csv", |t| (6.0 * t).sin(), 101);
    let out = run(&["envelope", "--input", &input, "--lip", "2", "--mode", "ph"]);
    assert!(out.status.success());
    let f = read_curve(Path::new(&input)).unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,lower,upper,mid"));
    for line in lines {
        let row: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        let v = f.eval(row[0]);
        assert!(row[1] <= v + 1e-12 && v <= row[2] + 1e-12);
        assert!((row[3] - 0.5 * (row[1] + row[2])).abs() < 1e-12);
    }

    let out = run(&["envelope", "--input", &input, "--mode", "ubhaya"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("t,upper,lower,mid"));

    let (code, err) = run_error(&["envelope", "--input", &input, "--mode", "ph"]);
    assert_eq!((code, err["error"].as_str()), (2, Some("InvalidInput")));
}

#[test]
fn derivative_matches_the_library() {
    let dir = TempDir::new().unwrap();
    let f = |t: f64| 0.5 * t + 0.5 * t * t * t;
    let j = |t: f64| (3.0 * t).sin();
    let input = write_curve_rows(dir.path(), "f.csv", f, 201);
    let perturb = write_curve_rows(dir.path(), "j.csv", j, 201);
    let v = run_json(&["deriv", "--input", &input, "--perturb", &perturb, "--lip", "1.3"]);
    let fg = read_curve(Path::new(&input)).unwrap();
    let jg = read_curve(Path::new(&perturb)).unwrap();
    let want = directional_derivative_lipschitz(&fg, &jg, 1.3, 1e-8).unwrap();
    assert_eq!(v["derivative"].as_f64().unwrap(), want.value);
    assert_eq!(v["t1"].as_array().unwrap().len(), want.sets.t1.len());
    assert_eq!(v["t3"].as_array().unwrap().len(), want.sets.t3.len());
}

#[test]
fn degenerate_derivative_exits_with_three() {
    let dir = TempDir::new().unwrap();
    let input = write_curve_rows(dir.path(), "f.csv", |t| t, 11);
    let perturb = write_curve_rows(dir.path(), "j.csv", |t| t, 11);
    let (code, err) = run_error(&["deriv", "--input", &input, "--perturb", &perturb, "--lip", "1"]);
    assert_eq!(code, 3);
    assert!(["BoundaryDegenerate", "DegenerateCase"].contains(&err["error"].as_str().unwrap()));
}

#[test]
fn oracle_matches_distance() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("h.csv");
    fs::write(&path, "0.2\n0.5\n0.9\n").unwrap();
    let v = run_json(&["oracle", "--input", &path.to_string_lossy(), "--alpha", "0.25"]);
    let gamma = GridFunction::step_left(vec![0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0], vec![0.0, 0.2, 0.5, 0.9]).unwrap();
    let d = trimdist::trim_gamma(&gamma, trimdist::TrimParams::new(0.25).unwrap()).unwrap().distance;
    assert!((v["distance"].as_f64().unwrap() - d).abs() <= 1e-10);
}

#[test]
fn error_exit_codes() {
    let (code, err) = run_error(&["gaussian", "--mu", "1", "--sigma", "2", "--alpha", "0.1"]);
    assert_eq!((code, err["error"].as_str()), (2, Some("UnsupportedCase")));
    assert!(err["detail"].is_string());

    let (code, err) = run_error(&["distance", "--f0", "normal:0,1", "--f", "normal:0,1", "--alpha", "1.5"]);
    assert_eq!((code, err["error"].as_str()), (2, Some("InvalidInput")));

    let (code, err) = run_error(&["distance", "--f0", "normal:0,1", "--f", "csv:/nonexistent/x.csv", "--alpha", "0.1"]);
    assert_eq!((code, err["error"].as_str()), (2, Some("InvalidInput")));

    let (code, err) = run_error(&["alpha-min", "--f0", "uniform:0,1", "--f", "uniform:2,3", "--grid", "101"]);
    assert_eq!((code, err["error"].as_str()), (3, Some("NotAttained")));
}

#[test]
fn empty_sample_is_rejected() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("empty.csv");
    fs::write(&path, "value\n").unwrap();
    let spec = format!("csv:{}", path.display());
    let (code, err) = run_error(&["distance", "--f0", "normal:0,1", "--f", &spec, "--alpha", "0.1"]);
    assert_eq!((code, err["error"].as_str()), (2, Some("InvalidInput")));
}

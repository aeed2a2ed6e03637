//! End-to-end checks of the `vwlasso` binary: exit codes, config-file and
//! flag precedence, the garch -> backtest weights handoff, warning paths on
//! degenerate inputs, and the fit -> explain round trip.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn fixture() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join("fixture_signal.csv")
        .to_str()
        .unwrap()
        .to_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vwlasso"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn lines(path: &Path) -> usize {
    fs::read_to_string(path).unwrap().lines().count()
}

fn csv_column(path: &Path, name: &str) -> Vec<String> {
    let text = fs::read_to_string(path).unwrap();
    let mut rows = text.lines();
    let header: Vec<&str> = rows.next().unwrap().split(',').collect();
    let idx = header
        .iter()
        .position(|h| *h == name)
        .unwrap_or_else(|| panic!("no column {name} in {path:?}"));
    rows.map(|r| r.split(',').nth(idx).unwrap().to_owned()).collect()
}

/// Quarterly CSV with a target, a well-behaved predictor, and optionally a
/// linear-trend predictor whose differences have zero variance.
fn write_quarterly_csv(path: &Path, n: usize, with_trend_column: bool) {
    let mut text = String::from("DATE,GDP,x1");
    if with_trend_column {
        text.push_str(",x2");
    }
    text.push('\n');
    for i in 0..n {
        let (year, q) = (1990 + i / 4, i % 4 + 1);
        let x1 = 1.5 * (0.9 * i as f64).sin() + 0.01 * i as f64;
        let gdp = 1.0 + x1 + 0.5 * (2.1 * i as f64 + 0.3).sin();
        text.push_str(&format!("{year}Q{q},{gdp:.6},{x1:.6}"));
        if with_trend_column {
            text.push_str(&format!(",{:.6}", 3.0 + 0.25 * i as f64));
        }
        text.push('\n');
    }
    fs::write(path, text).unwrap();
}

fn sidecar(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("sidecar.json")).unwrap()).unwrap()
}

#[test]
fn usage_errors_exit_with_code_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("o");
    let out_dir = out_dir.to_str().unwrap();

    let out = run(&["simulate", "--n", "5", "--out", out_dir]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    assert!(stderr(&out).contains("n must be at least 10"));

    let out = run(&["backtest", "--out", out_dir]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--input"));

    let out = run(&["simulate", "--no-such-flag"]);
    assert_eq!(code(&out), 2);

    let out = run(&["simulate", "--threads", "0", "--out", out_dir]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--threads"));

    let out = run(&["backtest", "--input", &fixture(), "--fractions", "1.5", "--out", out_dir]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--fractions"));
}

#[test]
fn help_and_version_exit_zero() {
    let out = run(&["--help"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    for sub in ["simulate", "backtest", "garch", "fit", "explain"] {
        assert!(text.contains(sub), "--help does not mention {sub}");
    }
    assert_eq!(code(&run(&["--version"])), 0);
    assert_eq!(code(&run(&["fit", "--help"])), 0);
}

#[test]
fn missing_fit_file_is_a_runtime_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&[
        "explain",
        "--input",
        &fixture(),
        "--fit",
        tmp.path().join("nope.json").to_str().unwrap(),
        "--out",
        tmp.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    // the error tells the user how to produce the missing artifact
    assert!(stderr(&out).contains("vwlasso fit"), "{}", stderr(&out));
}

#[test]
fn flags_override_config_file_fields() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg_path = tmp.path().join("sim.json");
    fs::write(&cfg_path, r#"{"n": 30, "seed": 5}"#).unwrap();
    let out_dir = tmp.path().join("run");
    let out = run(&[
        "simulate",
        "--config",
        cfg_path.to_str().unwrap(),
        "--n",
        "44",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let side = sidecar(&out_dir);
    assert_eq!(side["config"]["n"], 44, "flag must beat the config file");
    assert_eq!(side["config"]["seed"], 5, "untouched fields come from the file");
    assert_eq!(side["command"], "simulate");
    assert!(side["config_hash"].as_str().unwrap().len() == 64);
    assert_eq!(lines(&out_dir.join("dataset.csv")), 45, "header plus 44 rows");
}

#[test]
fn garch_weights_feed_backtest() {
    let tmp = tempfile::tempdir().unwrap();
    let gdir = tmp.path().join("garch");
    let out = run(&[
        "garch", "--input", &fixture(), "--seed", "42",
        "--out", gdir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let weights_path = gdir.join("weights.csv");
    let weights: Vec<f64> = csv_column(&weights_path, "weight")
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    assert_eq!(weights.len(), 5);
    let mean = weights.iter().sum::<f64>() / weights.len() as f64;
    assert!((mean - 1.0).abs() < 1e-10, "weights mean {mean}");

    let bdir = tmp.path().join("bt");
    let out = run(&[
        "backtest", "--input", &fixture(), "--seed", "42",
        "--weights", weights_path.to_str().unwrap(),
        "--out", bdir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = bdir.join("backtest.csv");
    assert_eq!(lines(&report), 16, "header plus 5 models x 3 fractions");
    for cell in csv_column(&report, "rmse") {
        assert!(cell.parse::<f64>().unwrap().is_finite());
    }
}

#[test]
fn gamma_zero_gives_exactly_unit_weights() {
    let tmp = tempfile::tempdir().unwrap();
    let gdir = tmp.path().join("g0");
    let out = run(&[
        "garch", "--input", &fixture(), "--gamma", "0",
        "--out", gdir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    for cell in csv_column(&gdir.join("weights.csv"), "weight") {
        assert_eq!(cell, "1.000000000000");
    }
}

#[test]
fn short_series_warns_but_exits_zero() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("short.csv");
    write_quarterly_csv(&input, 12, false);
    let gdir = tmp.path().join("g");
    let out = run(&[
        "garch", "--input", input.to_str().unwrap(),
        "--out", gdir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "warnings must not change the exit code");
    let err = stderr(&out);
    assert!(err.contains("warning") && err.contains("x1"), "{err}");
    assert!(err.contains("weights.csv skipped"), "{err}");
    assert!(gdir.join("garch_summary.csv").exists());
    assert!(!gdir.join("weights.csv").exists());
    let errors = csv_column(&gdir.join("garch_summary.csv"), "error");
    assert_eq!(errors.len(), 1);
    assert!(!errors[0].is_empty());
}

#[test]
fn degenerate_column_fails_only_the_weighted_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("trend.csv");
    write_quarterly_csv(&input, 60, true);
    let bdir = tmp.path().join("bt");
    let out = run(&[
        "backtest", "--input", input.to_str().unwrap(),
        "--out", bdir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stderr(&out).contains("x2"), "warning should name the bad column");

    let report = bdir.join("backtest.csv");
    let models = csv_column(&report, "model");
    let rmses = csv_column(&report, "rmse");
    assert_eq!(models.len(), 15);
    for (model, rmse) in models.iter().zip(rmses.iter()) {
        if model == "vw_lasso" {
            assert!(rmse.is_empty(), "weighted rows should be blank, got {rmse}");
        } else {
            assert!(rmse.parse::<f64>().unwrap().is_finite(), "{model}: {rmse}");
        }
    }
}

#[test]
fn fit_then_explain_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let fdir = tmp.path().join("fit");
    let out = run(&[
        "fit", "--input", &fixture(), "--model", "vw_lasso",
        "--train-fraction", "0.8", "--seed", "42",
        "--out", fdir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    for artifact in ["fit.json", "coefficients.csv", "lambda_path.csv", "weights.csv"] {
        assert!(fdir.join(artifact).exists(), "fit did not write {artifact}");
    }

    let edir = tmp.path().join("explain");
    let out = run(&[
        "explain", "--input", &fixture(),
        "--fit", fdir.join("fit.json").to_str().unwrap(),
        "--out", edir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(lines(&edir.join("shap_values.csv")), 149, "header plus 148 rows");
    assert_eq!(lines(&edir.join("shap_ranking.csv")), 6, "header plus 5 variables");
    assert!(edir.join("shap_plotdata.csv").exists());
    let side = sidecar(&edir);
    assert!(side["extra"]["base_value"].is_number());
    assert_eq!(side["extra"]["model"], "vw_lasso");
}

//! Fits all five models on the bundled fixture and compares coefficients and
//! holdout error.
//!
//! ```text
//! cargo run --release --example fit_models
//! ```

use vwlasso::core::{destandardize_fit, predict, standardize, FitResult, ModelKind};
use vwlasso::evaluate::{chronological_split, rmse, SplitSpec};
use vwlasso::garch::{volatility_weights, GarchOptions, VolTransform};
use vwlasso::io::{load_csv, IngestSpec};
use vwlasso::penalized::{
    fit_adaptive_lasso_auto, fit_lasso_auto, fit_ols, fit_ridge, fit_vw_lasso_auto,
    select_ridge_lambda, SolverConfig,
};

fn fixture() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/fixture_signal.csv")
}

fn main() {
    let d = load_csv(&IngestSpec::new(fixture(), "DATE", "GDP")).expect("fixture loads");
    let (train, test) = chronological_split(&d, &SplitSpec::new(0.8).unwrap()).unwrap();
    let (std_train, info) = standardize(&train).unwrap();
    let cfg = SolverConfig::default();
    let garch = GarchOptions::default();

    let mut fits: Vec<FitResult> = Vec::new();
    fits.push(fit_ols(&std_train).unwrap());
    fits.push(fit_lasso_auto(&std_train, &cfg).unwrap().0);
    let ridge_path = select_ridge_lambda(&std_train, &cfg).unwrap();
    fits.push(fit_ridge(&std_train, ridge_path.chosen_lambda()).unwrap());
    fits.push(fit_adaptive_lasso_auto(&std_train, &cfg).unwrap().0);
    let w = volatility_weights(&std_train, 1.0, VolTransform::Diff, &garch).unwrap();
    fits.push(fit_vw_lasso_auto(&std_train, &w, &cfg).unwrap().0);

    println!(
        "{:>14}  {:>9}  {}  {:>9}  {:>9}",
        "model",
        "intercept",
        d.column_names()
            .iter()
            .map(|n| format!("{n:>8}"))
            .collect::<Vec<_>>()
            .join(" "),
        "lambda",
        "test rmse"
    );
    let test_y: Vec<f64> = test.y().iter().copied().collect();
    for fit_std in &fits {
        let fit = destandardize_fit(fit_std, &info).unwrap();
        let pred: Vec<f64> = predict(&fit, test.x()).unwrap().iter().copied().collect();
        let err = rmse(&test_y, &pred).unwrap();
        let coefs = fit
            .coefficients
            .iter()
            .map(|c| format!("{c:>8.3}"))
            .collect::<Vec<_>>()
            .join(" ");
        let lambda = if fit.model_kind == ModelKind::Ols {
            "      --".to_string()
        } else {
            format!("{:>9.4}", fit.lambda)
        };
        println!(
            "{:>14}  {:>9.3}  {}  {}  {:>9.3}",
            fit.model_kind.label(),
            fit.intercept,
            coefs,
            lambda,
            err
        );
    }
    println!();
    println!("x1/x2 carry the signal; the sparse fits should keep them and drop most of x3..x5.");
}

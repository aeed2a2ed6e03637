//! Five-model backtest over chronological 70/80/90 percent training splits
//! of the bundled fixture. Standardization, λ selection, and the volatility
//! weights are all computed on each training window only.
//!
//! ```text
//! cargo run --release --example backtest
//! ```
//!
//! `data/backtest_golden.csv` freezes this report; the regression test
//! compares fresh output against it byte for byte.

use vwlasso::core::ModelKind;
use vwlasso::evaluate::{run_backtest, VolWeightConfig, BACKTEST_MODELS};
use vwlasso::garch::GarchOptions;
use vwlasso::io::{load_csv, IngestSpec};
use vwlasso::penalized::SolverConfig;

fn main() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/fixture_signal.csv");
    let d = load_csv(&IngestSpec::new(path, "DATE", "GDP")).expect("fixture loads");

    let vw = VolWeightConfig {
        garch: GarchOptions {
            seed: 42,
            ..GarchOptions::default()
        },
        ..VolWeightConfig::default()
    };
    let report = run_backtest(&d, &[0.7, 0.8, 0.9], &SolverConfig::default(), &vw).unwrap();

    println!(
        "{:>14}  {:>8}  {:>8}  {:>8}",
        "model", "fraction", "mae", "rmse"
    );
    for row in &report.rows {
        println!(
            "{:>14}  {:>8.2}  {:>8.4}  {:>8.4}",
            row.model.label(),
            row.train_fraction,
            row.mae.unwrap(),
            row.rmse.unwrap()
        );
    }

    println!();
    println!("mean RMSE over fractions:");
    for model in BACKTEST_MODELS {
        println!(
            "{:>14}  {:.4}",
            model.label(),
            report.mean_metric(model, |r| r.rmse).unwrap()
        );
    }
    let vw_mean = report.mean_metric(ModelKind::VwLasso, |r| r.rmse).unwrap();
    let lasso_mean = report.mean_metric(ModelKind::Lasso, |r| r.rmse).unwrap();
    println!();
    println!(
        "volatility weighting improves mean RMSE over the plain lasso by {:.1}%",
        100.0 * (1.0 - vw_mean / lasso_mean)
    );
}

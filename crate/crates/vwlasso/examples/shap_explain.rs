//! Attributes the volatility-weighted lasso's predictions on the fixture to
//! individual predictors. For a linear model the Shapley values are exact:
//! φ_j(t) = β_j · (x_{t,j} − mean_j), and they sum to prediction − base.
//!
//! ```text
//! cargo run --release --example shap_explain
//! ```

use vwlasso::core::{destandardize_fit, predict, standardize};
use vwlasso::evaluate::{chronological_split, SplitSpec};
use vwlasso::explain::{column_means, importance_ranking, linear_shap};
use vwlasso::garch::{volatility_weights, GarchOptions, VolTransform};
use vwlasso::io::{load_csv, IngestSpec};
use vwlasso::penalized::{fit_vw_lasso_auto, SolverConfig};

fn main() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/fixture_signal.csv");
    let d = load_csv(&IngestSpec::new(path, "DATE", "GDP")).expect("fixture loads");

    let (train, _) = chronological_split(&d, &SplitSpec::new(0.8).unwrap()).unwrap();
    let (std_train, info) = standardize(&train).unwrap();
    let w = volatility_weights(&std_train, 1.0, VolTransform::Diff, &GarchOptions::default()).unwrap();
    let (fit_std, _) = fit_vw_lasso_auto(&std_train, &w, &SolverConfig::default()).unwrap();
    let fit = destandardize_fit(&fit_std, &info).unwrap();

    let background = column_means(&train);
    let shap = linear_shap(&fit, &d, &background).unwrap();

    println!("base value (expected prediction at train means): {:.4}", shap.base_value);
    println!();
    println!("importance ranking by mean |SHAP| over all {} quarters:", shap.n());
    for (name, score) in importance_ranking(&shap) {
        println!("{name:>6}  {score:.4}");
    }

    // local accuracy: attributions plus base reproduce every prediction
    let preds = predict(&fit, d.x()).unwrap();
    let mut worst = 0.0f64;
    for (t, row) in shap.values.iter().enumerate() {
        let total: f64 = row.iter().sum();
        worst = worst.max((shap.base_value + total - preds[t]).abs());
    }
    println!();
    println!("largest |base + sum(SHAP) - prediction| over all rows: {worst:.2e}");

    let t = shap.n() - 1;
    println!();
    println!("decomposition of the last quarter ({}):", d.index().labels()[t]);
    for (j, name) in shap.column_names.iter().enumerate() {
        println!("{name:>6}  {:>8.4}", shap.values[t][j]);
    }
    println!("{:>6}  {:>8.4}  (base)", "", shap.base_value);
    println!("{:>6}  {:>8.4}  (prediction)", "=", preds[t]);
}

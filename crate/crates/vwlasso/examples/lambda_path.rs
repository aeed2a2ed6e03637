//! Walks the λ grid for a plain lasso on the fixture and shows how BIC, AIC,
//! and rolling-origin cross-validation pick different penalty levels.
//!
//! ```text
//! cargo run --release --example lambda_path
//! ```

use vwlasso::core::standardize;
use vwlasso::garch::PenaltyWeights;
use vwlasso::io::{load_csv, IngestSpec};
use vwlasso::penalized::{fit_lasso_auto, fit_weighted_lasso, Selection, SolverConfig};

fn main() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/fixture_signal.csv");
    let d = load_csv(&IngestSpec::new(path, "DATE", "GDP")).expect("fixture loads");
    let (std_data, _) = standardize(&d).unwrap();

    let mut cfg = SolverConfig::default();
    cfg.lambda_grid_size = 25;
    let unit = PenaltyWeights::unit(std_data.p());

    for selection in [Selection::Bic, Selection::Aic, Selection::RollingCv] {
        cfg.selection = selection;
        let (fit, path) = fit_lasso_auto(&std_data, &cfg).unwrap();
        println!("selection = {}", selection.label());
        println!("{:>12}  {:>14}  {:>8}", "lambda", "score", "nonzero");
        for (i, (l, s)) in path.lambdas.iter().zip(path.scores.iter()).enumerate() {
            let at_l = fit_weighted_lasso(&std_data, *l, &unit, &cfg).unwrap();
            let marker = if i == path.chosen_index { "  <-- chosen" } else { "" };
            println!(
                "{l:>12.6}  {s:>14.4}  {:>8}{marker}",
                at_l.p() - at_l.zero_count()
            );
        }
        println!(
            "chosen lambda {:.6} keeps {} of {} coefficients\n",
            fit.lambda,
            fit.p() - fit.zero_count(),
            fit.p()
        );
    }
}

//! Per-column GARCH(1,1) fits on the fixture and the penalty weights they
//! imply at several γ values.
//!
//! ```text
//! cargo run --release --example volatility_weights
//! ```
//!
//! Weights average exactly 1, so γ only shifts penalty mass between calm and
//! volatile predictors without changing the overall penalty level.

use vwlasso::core::standardize;
use vwlasso::garch::{column_garch_fits, weights_from_volatilities, GarchOptions, VolTransform};
use vwlasso::io::{load_csv, IngestSpec};

fn main() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/fixture_signal.csv");
    let d = load_csv(&IngestSpec::new(path, "DATE", "GDP")).expect("fixture loads");
    let (std_data, _) = standardize(&d).unwrap();

    let fits = column_garch_fits(&std_data, VolTransform::Diff, &GarchOptions::default());
    println!(
        "{:>6}  {:>8}  {:>8}  {:>8}  {:>7}  {:>8}",
        "column", "omega", "alpha", "beta", "a+b", "mean vol"
    );
    let mut vols = Vec::new();
    for (name, outcome) in &fits {
        let (fit, v) = outcome.as_ref().expect("fixture columns all fit");
        println!(
            "{name:>6}  {:>8.4}  {:>8.4}  {:>8.4}  {:>7.4}  {:>8.4}",
            fit.params.omega,
            fit.params.alpha,
            fit.params.beta,
            fit.params.alpha + fit.params.beta,
            v
        );
        vols.push(*v);
    }

    println!();
    println!("penalty weights w_j ∝ (1/v_j)^γ, normalized to mean 1:");
    print!("{:>6}", "gamma");
    for (name, _) in &fits {
        print!("  {name:>8}");
    }
    println!();
    for gamma in [0.0, 0.5, 1.0, 2.0] {
        let w = weights_from_volatilities(&vols, gamma).unwrap();
        print!("{gamma:>6.1}");
        for wj in &w.weights {
            print!("  {wj:>8.4}");
        }
        let mean = w.weights.iter().sum::<f64>() / w.weights.len() as f64;
        println!("   (mean {mean:.12})");
    }
    println!();
    println!("x1/x2 after differencing are the burstiest, so they get the smallest weights.");
}

//! Draws one instance of the default heteroskedastic design (five AR(1)
//! predictors, sinusoidal error volatility, true β = [3, −2, 0, 0, 0]) and
//! prints the coefficient table for the three sparse fits.
//!
//! ```text
//! cargo run --release --example simulation_study
//! ```

use vwlasso::penalized::SolverConfig;
use vwlasso::simulate::{run_table1, simulate_dgp, SimConfig};

fn main() {
    let mut cfg = SimConfig::default();
    cfg.seed = 1;
    let inst = simulate_dgp(&cfg).unwrap();
    let table = run_table1(&cfg, &SolverConfig::default()).unwrap();

    println!(
        "one draw: n = {}, p = {}, error AR(1) = {}, sigma in [{:.2}, {:.2}]",
        cfg.n, cfg.p, cfg.error_ar, cfg.vol_low, cfg.vol_high
    );
    println!();
    print!("{:>14}", "model");
    for name in inst.dataset.column_names() {
        print!("  {name:>8}");
    }
    println!("  {:>10}", "lambda");

    print!("{:>14}", "truth");
    for b in &inst.true_beta {
        print!("  {b:>8.3}");
    }
    println!("  {:>10}", "--");

    for (m, model) in table.models.iter().enumerate() {
        print!("{:>14}", model.label());
        for c in &table.coefficients[m] {
            print!("  {c:>8.3}");
        }
        println!("  {:>10.4}", table.lambdas[m]);
    }
    println!();
    println!("Coefficients are on the raw data scale, so they compare directly to the truth row.");
}

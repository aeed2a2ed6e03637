//! Ingests the macro-style sample panel with per-column transforms, then
//! writes it back out and reloads it to show the round trip.
//!
//! ```text
//! cargo run --release --example csv_pipeline
//! ```
//!
//! `macro_sample.csv` holds positive level series (GDP, price and activity
//! indices), so each column is converted to log differences at load time.
//! Transforms consume one leading row, and every column is shortened
//! together so the panel stays aligned.

use vwlasso::io::{load_csv, write_dataset_csv, ColumnTransform, IngestSpec};

fn main() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let mut spec = IngestSpec::new(dir.join("macro_sample.csv"), "DATE", "GDP");
    for column in [
        "GDP", "INFLATION", "HOUSING", "PC", "PCE", "GCE", "NET", "UNEMPLOY", "M1", "NASDAQ",
        "WTI",
    ] {
        spec.transforms
            .insert(column.to_string(), ColumnTransform::LogDiff);
    }

    let d = load_csv(&spec).expect("sample loads");
    println!(
        "loaded {} rows x {} predictors ({}..{})",
        d.n(),
        d.p(),
        d.index().labels().first().unwrap(),
        d.index().labels().last().unwrap()
    );
    println!("predictors: {}", d.column_names().join(", "));
    println!();
    println!("first log-diff rows of the target and the first three predictors:");
    for t in 0..4 {
        println!(
            "{}  GDP {:>9.5}  {} {:>9.5}  {} {:>9.5}  {} {:>9.5}",
            d.index().labels()[t],
            d.y()[t],
            d.column_names()[0],
            d.x()[(t, 0)],
            d.column_names()[1],
            d.x()[(t, 1)],
            d.column_names()[2],
            d.x()[(t, 2)],
        );
    }

    let out = std::env::temp_dir().join("vwlasso_pipeline_demo.csv");
    write_dataset_csv(&d, &out).expect("write transformed panel");
    let back = load_csv(&IngestSpec::new(&out, "DATE", "GDP")).expect("reload");
    let mut worst = 0.0f64;
    for t in 0..d.n() {
        worst = worst.max((back.y()[t] - d.y()[t]).abs());
        for j in 0..d.p() {
            worst = worst.max((back.x()[(t, j)] - d.x()[(t, j)]).abs());
        }
    }
    println!();
    println!(
        "wrote the transformed panel to {} and reloaded it; largest round-trip error {worst:.2e}",
        out.display()
    );
}

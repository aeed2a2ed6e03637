//! CSV ingestion and report serialization.
//!
//! Report CSVs (backtests, coefficient tables, attributions) use fixed
//! 6-decimal formatting; files meant to be fed back into computations
//! (datasets, weights, GARCH parameters) use 12 decimals; λ grids span many
//! orders of magnitude and use 6-decimal scientific notation. Every writer
//! emits rows in a deterministic order and every report gets a JSON sidecar
//! carrying the tool version, the seed, and a hash of the resolved
//! configuration.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::core::{Dataset, FitResult, ModelKind, TimeIndex};
use crate::error::{Error, Result};
use crate::evaluate::{BacktestReport, BacktestRow};
use crate::explain::ShapMatrix;
use crate::garch::{PenaltyWeights, WeightSource};
use crate::penalized::LambdaPath;
use crate::simulate::{CoefficientTable, ReplicationReport, SimInstance};

// ---------------------------------------------------------------------------
// ingestion

/// Per-column preprocessing applied at load time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnTransform {
    None,
    /// x_t − x_{t−1}
    Diff,
    /// (x_t − x_{t−1}) / x_{t−1}
    PctChange,
    /// ln x_t − ln x_{t−1}, positive values only
    LogDiff,
}

impl ColumnTransform {
    pub fn label(&self) -> &'static str {
        match self {
            ColumnTransform::None => "none",
            ColumnTransform::Diff => "diff",
            ColumnTransform::PctChange => "pct_change",
            ColumnTransform::LogDiff => "log_diff",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "none" => Some(ColumnTransform::None),
            "diff" => Some(ColumnTransform::Diff),
            "pct_change" => Some(ColumnTransform::PctChange),
            "log_diff" => Some(ColumnTransform::LogDiff),
            _ => None,
        }
    }

    /// Rows consumed from the head of the series.
    pub fn lead(&self) -> usize {
        match self {
            ColumnTransform::None => 0,
            _ => 1,
        }
    }

    fn apply(&self, column: &str, v: &[f64]) -> Result<Vec<f64>> {
        match self {
            ColumnTransform::None => Ok(v.to_vec()),
            ColumnTransform::Diff => Ok(v.windows(2).map(|w| w[1] - w[0]).collect()),
            ColumnTransform::PctChange => v
                .windows(2)
                .enumerate()
                .map(|(t, w)| {
                    if w[0] == 0.0 {
                        Err(Error::InvalidTransform {
                            column: column.to_string(),
                            reason: format!("pct_change hits a zero denominator at data row {}", t + 1),
                        })
                    } else {
                        Ok((w[1] - w[0]) / w[0])
                    }
                })
                .collect(),
            ColumnTransform::LogDiff => {
                for (t, x) in v.iter().enumerate() {
                    if *x <= 0.0 {
                        return Err(Error::InvalidTransform {
                            column: column.to_string(),
                            reason: format!("log_diff requires positive values, found {x} at data row {}", t + 1),
                        });
                    }
                }
                Ok(v.windows(2).map(|w| w[1].ln() - w[0].ln()).collect())
            }
        }
    }
}

impl std::fmt::Display for ColumnTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// How to read a CSV into a [`Dataset`].
///
/// When `predictor_columns` is absent, every column other than the date and
/// target becomes a predictor, in file order. `transforms` maps column names
/// (target included) to a [`ColumnTransform`]; one-lag transforms drop the
/// first row of every column so all series stay aligned.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestSpec {
    pub path: PathBuf,
    pub date_column: String,
    pub target_column: String,
    #[serde(default)]
    pub predictor_columns: Option<Vec<String>>,
    #[serde(default)]
    pub transforms: BTreeMap<String, ColumnTransform>,
}

impl IngestSpec {
    pub fn new(path: impl Into<PathBuf>, date_column: &str, target_column: &str) -> Self {
        Self {
            path: path.into(),
            date_column: date_column.to_string(),
            target_column: target_column.to_string(),
            predictor_columns: None,
            transforms: BTreeMap::new(),
        }
    }
}

/// Quarterly period accepted as `1986Q1` or as the quarter-start date
/// `1986-01-01` (months 1, 4, 7, 10; day 1).
fn parse_quarter(raw: &str) -> Option<(i32, u8)> {
    let s = raw.trim();
    if let Some(pos) = s.find(['Q', 'q']) {
        let year: i32 = s[..pos].parse().ok()?;
        let q: u8 = s[pos + 1..].parse().ok()?;
        return (1..=4).contains(&q).then_some((year, q));
    }
    let mut parts = s.split('-');
    let year: i32 = parts.next()?.parse().ok()?;
    let month: u8 = parts.next()?.parse().ok()?;
    let day: u8 = parts.next()?.parse().ok()?;
    if parts.next().is_some() || day != 1 {
        return None;
    }
    let q = match month {
        1 => 1,
        4 => 2,
        7 => 3,
        10 => 4,
        _ => return None,
    };
    Some((year, q))
}

fn quarter_label(year: i32, q: u8) -> String {
    format!("{year}Q{q}")
}

/// Consecutive quarterly labels `<start_year>Q1, <start_year>Q2, ...`.
pub fn quarterly_index(start_year: i32, n: usize) -> Result<TimeIndex> {
    TimeIndex::new(
        (0..n)
            .map(|t| quarter_label(start_year + (t / 4) as i32, (t % 4) as u8 + 1))
            .collect(),
    )
}

/// Rebuilds a dataset on a quarterly index starting at `<start_year>Q1`, so
/// synthetic draws can be written to CSV in the ingestible date format.
pub fn with_quarterly_index(d: &Dataset, start_year: i32) -> Result<Dataset> {
    Dataset::new(
        quarterly_index(start_year, d.n())?,
        d.target_name(),
        d.y().clone(),
        d.x().clone(),
        d.column_names().to_vec(),
    )
}

/// Reads a headered CSV into a [`Dataset`].
///
/// Dates must form a strictly increasing quarterly sequence. Cell errors are
/// reported with 1-based coordinates: `row` counts data rows (the header is
/// row 0), `col` counts file columns from 1.
pub fn load_csv(spec: &IngestSpec) -> Result<Dataset> {
    if spec.date_column == spec.target_column {
        return Err(Error::InvalidInput(
            "date_column and target_column must differ".into(),
        ));
    }
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(&spec.path)
        .map_err(|e| Error::IoFailure(format!("{}: {e}", spec.path.display())))?;
    let headers: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::IoFailure(format!("{}: {e}", spec.path.display())))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();

    let find = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    };
    let date_idx = find(&spec.date_column)?;
    let target_idx = find(&spec.target_column)?;
    let predictor_idx: Vec<usize> = match &spec.predictor_columns {
        Some(names) => {
            let mut idx = Vec::with_capacity(names.len());
            for name in names {
                if name == &spec.date_column || name == &spec.target_column {
                    return Err(Error::InvalidInput(format!(
                        "predictor '{name}' duplicates the date or target column"
                    )));
                }
                idx.push(find(name)?);
            }
            idx
        }
        None => (0..headers.len())
            .filter(|i| *i != date_idx && *i != target_idx)
            .collect(),
    };
    if predictor_idx.is_empty() {
        return Err(Error::InvalidInput("no predictor columns".into()));
    }

    let used: Vec<usize> = std::iter::once(target_idx)
        .chain(predictor_idx.iter().copied())
        .collect();
    for name in spec.transforms.keys() {
        if name == &spec.date_column {
            return Err(Error::InvalidTransform {
                column: name.clone(),
                reason: "the date column cannot be transformed".into(),
            });
        }
        if !used.iter().any(|&i| &headers[i] == name) {
            return Err(Error::MissingColumn(name.clone()));
        }
    }

    let mut quarters: Vec<(i32, u8)> = Vec::new();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); used.len()];
    for (r, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::IoFailure(format!("{}: {e}", spec.path.display())))?;
        let row = r + 1;
        let raw_date = record.get(date_idx).unwrap_or("");
        let quarter = parse_quarter(raw_date).ok_or_else(|| Error::BadDate {
            row,
            value: raw_date.to_string(),
        })?;
        if let Some(prev) = quarters.last() {
            if quarter <= *prev {
                return Err(Error::NonMonotonicDates { row });
            }
        }
        quarters.push(quarter);
        for (k, &i) in used.iter().enumerate() {
            let cell = record.get(i).unwrap_or("");
            let value: f64 = cell.trim().parse().unwrap_or(f64::NAN);
            if !value.is_finite() {
                return Err(Error::NonNumericCell {
                    row,
                    col: i + 1,
                    name: headers[i].clone(),
                });
            }
            columns[k].push(value);
        }
    }
    let n = quarters.len();
    if n == 0 {
        return Err(Error::InvalidInput(format!(
            "{}: no data rows",
            spec.path.display()
        )));
    }

    let transform_of = |name: &str| -> ColumnTransform {
        spec.transforms
            .get(name)
            .copied()
            .unwrap_or(ColumnTransform::None)
    };
    let lead = used
        .iter()
        .map(|&i| transform_of(&headers[i]).lead())
        .max()
        .unwrap_or(0);
    if n <= lead {
        return Err(Error::EmptyAfterTransform);
    }
    let n_final = n - lead;

    let mut transformed: Vec<Vec<f64>> = Vec::with_capacity(used.len());
    for (k, &i) in used.iter().enumerate() {
        let name = &headers[i];
        let t = transform_of(name);
        let series = t.apply(name, &columns[k])?;
        // keep the tail so every column covers the same periods
        transformed.push(series[series.len() - n_final..].to_vec());
    }

    let labels: Vec<String> = quarters[lead..]
        .iter()
        .map(|(y, q)| quarter_label(*y, *q))
        .collect();
    let index = TimeIndex::new(labels)?;
    let y = nalgebra::DVector::from_vec(transformed[0].clone());
    let x = nalgebra::DMatrix::from_fn(n_final, predictor_idx.len(), |i, j| transformed[j + 1][i]);
    let names: Vec<String> = predictor_idx.iter().map(|&i| headers[i].clone()).collect();
    Dataset::new(index, &spec.target_column, y, x, names)
}

// ---------------------------------------------------------------------------
// formatting helpers

fn f6(x: f64) -> String {
    format!("{x:.6}")
}

fn f12(x: f64) -> String {
    format!("{x:.12}")
}

fn e6(x: f64) -> String {
    format!("{x:.6e}")
}

fn writer_for(path: &Path) -> Result<csv::Writer<std::io::BufWriter<fs::File>>> {
    let file = fs::File::create(path)
        .map_err(|e| Error::IoFailure(format!("{}: {e}", path.display())))?;
    Ok(csv::Writer::from_writer(std::io::BufWriter::new(file)))
}

fn finish(mut w: csv::Writer<std::io::BufWriter<fs::File>>) -> Result<()> {
    w.flush().map_err(|e| Error::IoFailure(e.to_string()))
}

// ---------------------------------------------------------------------------
// dataset and simulation output

/// Writes `DATE,<target>,<predictors...>` at 12-decimal precision.
pub fn write_dataset_csv(d: &Dataset, path: &Path) -> Result<()> {
    let mut w = writer_for(path)?;
    let mut header = vec!["DATE".to_string(), d.target_name().to_string()];
    header.extend(d.column_names().iter().cloned());
    w.write_record(&header)?;
    for t in 0..d.n() {
        let mut row = vec![d.index().labels()[t].clone(), f12(d.y()[t])];
        for j in 0..d.p() {
            row.push(f12(d.x()[(t, j)]));
        }
        w.write_record(&row)?;
    }
    finish(w)
}

/// Writes the generator's true coefficients and volatility path alongside the
/// drawn dataset: `DATE,sigma` plus a `variable,true_beta` table.
pub fn write_sim_truth_csv(inst: &SimInstance, path: &Path) -> Result<()> {
    let mut w = writer_for(path)?;
    w.write_record(["variable", "true_beta"])?;
    for (name, b) in inst.dataset.column_names().iter().zip(inst.true_beta.iter()) {
        w.write_record([name.as_str(), &f12(*b)])?;
    }
    finish(w)
}

/// Per-model coefficient table from a simulation fit: `model,<names...>,lambda`.
pub fn write_coefficient_table_csv(
    table: &CoefficientTable,
    names: &[String],
    path: &Path,
) -> Result<()> {
    let mut w = writer_for(path)?;
    let mut header = vec!["model".to_string()];
    header.extend(names.iter().cloned());
    header.push("lambda".to_string());
    w.write_record(&header)?;
    for (m, model) in table.models.iter().enumerate() {
        let mut row = vec![model.label().to_string()];
        row.extend(table.coefficients[m].iter().map(|c| f6(*c)));
        row.push(e6(table.lambdas[m]));
        w.write_record(&row)?;
    }
    finish(w)
}

/// Long-format replication records: `rep,seed,model,l2,precision,recall`.
pub fn write_replication_records_csv(report: &ReplicationReport, path: &Path) -> Result<()> {
    let mut w = writer_for(path)?;
    w.write_record(["rep", "seed", "model", "l2", "precision", "recall"])?;
    for rec in &report.records {
        for (m, model) in report.models.iter().enumerate() {
            w.write_record([
                rec.rep.to_string(),
                rec.seed.to_string(),
                model.label().to_string(),
                f6(rec.l2[m]),
                f6(rec.precision[m]),
                f6(rec.recall[m]),
            ])?;
        }
    }
    finish(w)
}

/// Per-model replication summary: `model,median_l2,iqr_l2,mean_precision,mean_recall`.
pub fn write_replication_summary_csv(report: &ReplicationReport, path: &Path) -> Result<()> {
    let mut w = writer_for(path)?;
    w.write_record(["model", "median_l2", "iqr_l2", "mean_precision", "mean_recall"])?;
    for (m, model) in report.models.iter().enumerate() {
        w.write_record([
            model.label().to_string(),
            f6(report.median_l2[m]),
            f6(report.iqr_l2[m]),
            f6(report.mean_precision[m]),
            f6(report.mean_recall[m]),
        ])?;
    }
    finish(w)
}

// ---------------------------------------------------------------------------
// backtest output

/// Writes `model,train_fraction,mae,rmse`; failed cells leave mae/rmse empty.
pub fn write_backtest_csv(report: &BacktestReport, path: &Path) -> Result<()> {
    let mut w = writer_for(path)?;
    w.write_record(["model", "train_fraction", "mae", "rmse"])?;
    for row in &report.rows {
        w.write_record([
            row.model.label().to_string(),
            f6(row.train_fraction),
            row.mae.map(f6).unwrap_or_default(),
            row.rmse.map(f6).unwrap_or_default(),
        ])?;
    }
    finish(w)
}

/// Reads a backtest CSV back into rows (metrics only; fits are not stored in
/// the CSV).
pub fn read_backtest_csv(path: &Path) -> Result<Vec<BacktestRow>> {
    let mut rdr = csv::Reader::from_path(path)
        .map_err(|e| Error::IoFailure(format!("{}: {e}", path.display())))?;
    let headers = rdr.headers()?.clone();
    let expected = ["model", "train_fraction", "mae", "rmse"];
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(Error::InvalidInput(format!(
            "{}: unexpected backtest header '{}'",
            path.display(),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = Vec::new();
    for (r, record) in rdr.records().enumerate() {
        let record = record?;
        let model = ModelKind::parse(record.get(0).unwrap_or("")).ok_or_else(|| {
            Error::InvalidInput(format!("unknown model '{}' at data row {}", record.get(0).unwrap_or(""), r + 1))
        })?;
        let parse_opt = |s: Option<&str>| -> Result<Option<f64>> {
            match s.map(str::trim) {
                None | Some("") => Ok(None),
                Some(v) => v
                    .parse::<f64>()
                    .map(Some)
                    .map_err(|_| Error::NonNumericCell {
                        row: r + 1,
                        col: 3,
                        name: "mae/rmse".into(),
                    }),
            }
        };
        let train_fraction: f64 = record
            .get(1)
            .unwrap_or("")
            .parse()
            .map_err(|_| Error::NonNumericCell {
                row: r + 1,
                col: 2,
                name: "train_fraction".into(),
            })?;
        rows.push(BacktestRow {
            model,
            train_fraction,
            mae: parse_opt(record.get(2))?,
            rmse: parse_opt(record.get(3))?,
            lambda: None,
            fit: None,
            error: None,
        });
    }
    Ok(rows)
}

/// Long-format coefficient export for every successful backtest cell:
/// `model,train_fraction,variable,coefficient` with an `(intercept)` row per
/// fit.
pub fn write_backtest_coefficients_csv(
    report: &BacktestReport,
    names: &[String],
    path: &Path,
) -> Result<()> {
    let mut w = writer_for(path)?;
    w.write_record(["model", "train_fraction", "variable", "coefficient"])?;
    for row in &report.rows {
        let Some(fit) = &row.fit else { continue };
        w.write_record([
            row.model.label().to_string(),
            f6(row.train_fraction),
            "(intercept)".to_string(),
            f6(fit.intercept),
        ])?;
        for (name, c) in names.iter().zip(fit.coefficients.iter()) {
            w.write_record([
                row.model.label().to_string(),
                f6(row.train_fraction),
                name.clone(),
                f6(*c),
            ])?;
        }
    }
    finish(w)
}

// ---------------------------------------------------------------------------
// weights and GARCH output

/// Writes `column,volatility,weight,gamma` at 12 decimals. The file is
/// self-describing and can be loaded back with [`load_weights`].
pub fn write_weights_csv(
    names: &[String],
    volatilities: &[f64],
    weights: &PenaltyWeights,
    path: &Path,
) -> Result<()> {
    if names.len() != weights.p() || volatilities.len() != weights.p() {
        return Err(Error::LengthMismatch {
            expected: weights.p(),
            got: names.len().min(volatilities.len()),
        });
    }
    let mut w = writer_for(path)?;
    w.write_record(["column", "volatility", "weight", "gamma"])?;
    for j in 0..weights.p() {
        w.write_record([
            names[j].clone(),
            f12(volatilities[j]),
            f12(weights.weights[j]),
            f12(weights.gamma),
        ])?;
    }
    finish(w)
}

/// Reads a weights CSV back as (column names, volatilities, weights).
pub fn load_weights(path: &Path) -> Result<(Vec<String>, Vec<f64>, PenaltyWeights)> {
    let mut rdr = csv::Reader::from_path(path)
        .map_err(|e| Error::IoFailure(format!("{}: {e}", path.display())))?;
    let mut names = Vec::new();
    let mut vols = Vec::new();
    let mut weights = Vec::new();
    let mut gamma = f64::NAN;
    for (r, record) in rdr.records().enumerate() {
        let record = record?;
        let cell = |i: usize, name: &str| -> Result<f64> {
            record
                .get(i)
                .unwrap_or("")
                .trim()
                .parse()
                .map_err(|_| Error::NonNumericCell {
                    row: r + 1,
                    col: i + 1,
                    name: name.to_string(),
                })
        };
        names.push(record.get(0).unwrap_or("").to_string());
        vols.push(cell(1, "volatility")?);
        weights.push(cell(2, "weight")?);
        gamma = cell(3, "gamma")?;
    }
    let w = PenaltyWeights {
        weights,
        gamma,
        source: WeightSource::Volatility,
    };
    w.validate()?;
    Ok((names, vols, w))
}

/// One predictor's GARCH outcome for the per-column summary CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GarchColumnSummary {
    pub column: String,
    pub omega: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub loglik: Option<f64>,
    pub converged: Option<bool>,
    pub mean_volatility: Option<f64>,
    pub error: Option<String>,
}

/// Writes `column,omega,alpha,beta,loglik,converged,mean_volatility,error`;
/// failed columns keep their row with the message in the last cell.
pub fn write_garch_summary_csv(rows: &[GarchColumnSummary], path: &Path) -> Result<()> {
    let mut w = writer_for(path)?;
    w.write_record([
        "column",
        "omega",
        "alpha",
        "beta",
        "loglik",
        "converged",
        "mean_volatility",
        "error",
    ])?;
    for row in rows {
        w.write_record([
            row.column.clone(),
            row.omega.map(f12).unwrap_or_default(),
            row.alpha.map(f12).unwrap_or_default(),
            row.beta.map(f12).unwrap_or_default(),
            row.loglik.map(f12).unwrap_or_default(),
            row.converged.map(|c| c.to_string()).unwrap_or_default(),
            row.mean_volatility.map(f12).unwrap_or_default(),
            row.error.clone().unwrap_or_default(),
        ])?;
    }
    finish(w)
}

/// Long-format conditional variance series: `column,t,cond_var` with t
/// 1-based within each column's (possibly transformed) series.
pub fn write_cond_var_csv(series: &[(String, Vec<f64>)], path: &Path) -> Result<()> {
    let mut w = writer_for(path)?;
    w.write_record(["column", "t", "cond_var"])?;
    for (name, vars) in series {
        for (t, v) in vars.iter().enumerate() {
            w.write_record([name.clone(), (t + 1).to_string(), f12(*v)])?;
        }
    }
    finish(w)
}

// ---------------------------------------------------------------------------
// λ path and attribution output

/// Writes `lambda,score,chosen` in grid order (decreasing λ), scientific
/// notation so tiny penalties stay readable.
pub fn write_lambda_path_csv(path_obj: &LambdaPath, path: &Path) -> Result<()> {
    let mut w = writer_for(path)?;
    w.write_record(["lambda", "score", "chosen"])?;
    for (i, (l, s)) in path_obj.lambdas.iter().zip(path_obj.scores.iter()).enumerate() {
        w.write_record([e6(*l), e6(*s), (i == path_obj.chosen_index).to_string()])?;
    }
    finish(w)
}

/// Per-row attributions: `date,<names...>`. The base value travels in the
/// sidecar, not the CSV.
pub fn write_shap_csv(s: &ShapMatrix, labels: &[String], path: &Path) -> Result<()> {
    if labels.len() != s.n() {
        return Err(Error::LengthMismatch {
            expected: s.n(),
            got: labels.len(),
        });
    }
    let mut w = writer_for(path)?;
    let mut header = vec!["date".to_string()];
    header.extend(s.column_names.iter().cloned());
    w.write_record(&header)?;
    for (t, row) in s.values.iter().enumerate() {
        let mut rec = vec![labels[t].clone()];
        rec.extend(row.iter().map(|v| f6(*v)));
        w.write_record(&rec)?;
    }
    finish(w)
}

/// Importance ranking: `variable,mean_abs_shap`, descending.
pub fn write_ranking_csv(ranking: &[(String, f64)], path: &Path) -> Result<()> {
    let mut w = writer_for(path)?;
    w.write_record(["variable", "mean_abs_shap"])?;
    for (name, score) in ranking {
        w.write_record([name.clone(), f6(*score)])?;
    }
    finish(w)
}

/// Per-variable |SHAP| distributions in long format (`variable,abs_shap`),
/// variable-major, for box/beeswarm style plotting.
pub fn write_shap_plotdata_csv(s: &ShapMatrix, path: &Path) -> Result<()> {
    let mut w = writer_for(path)?;
    w.write_record(["variable", "abs_shap"])?;
    for (j, name) in s.column_names.iter().enumerate() {
        for row in &s.values {
            w.write_record([name.clone(), f6(row[j].abs())])?;
        }
    }
    finish(w)
}

// ---------------------------------------------------------------------------
// fits and sidecars

/// A raw-scale fit plus everything needed to attribute predictions later.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SavedFit {
    pub fit: FitResult,
    pub target_name: String,
    pub column_names: Vec<String>,
    pub train_fraction: f64,
    /// Train-sample predictor means, the attribution background point.
    pub background_means: Vec<f64>,
    pub seed: u64,
}

pub fn write_fit_json(saved: &SavedFit, path: &Path) -> Result<()> {
    let mut body = serde_json::to_string_pretty(saved)
        .map_err(|e| Error::IoFailure(e.to_string()))?;
    body.push('\n');
    fs::write(path, body).map_err(|e| Error::IoFailure(format!("{}: {e}", path.display())))
}

pub fn read_fit_json(path: &Path) -> Result<SavedFit> {
    let body = fs::read_to_string(path)
        .map_err(|e| Error::IoFailure(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&body)
        .map_err(|e| Error::IoFailure(format!("{}: {e}", path.display())))
}

/// Reproducibility sidecar written next to every report.
///
/// Deliberately carries no timestamps or thread counts, so reruns of the same
/// seeded command produce byte-identical sidecars.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub tool_version: String,
    pub command: String,
    pub seed: Option<u64>,
    pub config_hash: String,
    pub config: serde_json::Value,
    pub warnings: Vec<String>,
    /// Small command-specific result values (e.g. an attribution base value).
    #[serde(default)]
    pub extra: serde_json::Value,
}

impl Sidecar {
    pub fn new(command: &str, config: serde_json::Value, seed: Option<u64>) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            seed,
            config_hash: config_hash(&config),
            config,
            warnings: Vec::new(),
            extra: serde_json::Value::Null,
        }
    }
}

/// SHA-256 of the compact JSON encoding. `serde_json` keeps object keys
/// sorted, so the hash is independent of insertion order.
pub fn config_hash(config: &serde_json::Value) -> String {
    let canonical = serde_json::to_string(config).unwrap_or_default();
    let digest = Sha256::digest(canonical.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn write_sidecar(sidecar: &Sidecar, path: &Path) -> Result<()> {
    let mut body = serde_json::to_string_pretty(sidecar)
        .map_err(|e| Error::IoFailure(e.to_string()))?;
    body.push('\n');
    fs::write(path, body).map_err(|e| Error::IoFailure(format!("{}: {e}", path.display())))
}

pub fn read_sidecar(path: &Path) -> Result<Sidecar> {
    let body = fs::read_to_string(path)
        .map_err(|e| Error::IoFailure(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&body)
        .map_err(|e| Error::IoFailure(format!("{}: {e}", path.display())))
}

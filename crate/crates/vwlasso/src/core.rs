//! Shared data model: time-indexed datasets, standardization, fitted models,
//! and prediction for the linear model y_t = β_0 + Σ_j β_j x_{j,t} + ε_t.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered sequence of period labels such as `1986Q1`.
///
/// Labels must be strictly increasing under string comparison, which holds for
/// canonical quarterly labels and for zero-padded synthetic labels (`t0001`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeIndex {
    labels: Vec<String>,
}

impl TimeIndex {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidInput("time index must not be empty".into()));
        }
        for pair in labels.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::InvalidInput(format!(
                    "time index labels must be strictly increasing ('{}' follows '{}')",
                    pair[1], pair[0]
                )));
            }
        }
        Ok(Self { labels })
    }

    /// Synthetic index `t0001, t0002, ...` of the given length.
    pub fn synthetic(n: usize) -> Self {
        let width = n.to_string().len().max(4);
        let labels = (1..=n).map(|t| format!("t{t:0width$}")).collect();
        Self { labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    fn slice(&self, range: std::ops::Range<usize>) -> Self {
        Self {
            labels: self.labels[range].to_vec(),
        }
    }
}

/// Aligned target vector and predictor matrix with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    index: TimeIndex,
    target_name: String,
    y: DVector<f64>,
    x: DMatrix<f64>,
    column_names: Vec<String>,
}

impl Dataset {
    pub fn new(
        index: TimeIndex,
        target_name: impl Into<String>,
        y: DVector<f64>,
        x: DMatrix<f64>,
        column_names: Vec<String>,
    ) -> Result<Self> {
        let n = index.len();
        if y.len() != n || x.nrows() != n {
            return Err(Error::DimensionMismatch(format!(
                "index has {n} periods but y has {} entries and x has {} rows",
                y.len(),
                x.nrows()
            )));
        }
        if x.ncols() == 0 {
            return Err(Error::InvalidInput("dataset needs at least one predictor".into()));
        }
        if column_names.len() != x.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "{} column names for {} predictor columns",
                column_names.len(),
                x.ncols()
            )));
        }
        for (j, name) in column_names.iter().enumerate() {
            if column_names[..j].contains(name) {
                return Err(Error::InvalidInput(format!("duplicate column name '{name}'")));
            }
        }
        if y.iter().any(|v| !v.is_finite()) || x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("dataset contains non-finite values".into()));
        }
        Ok(Self {
            index,
            target_name: target_name.into(),
            y,
            x,
            column_names,
        })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn index(&self) -> &TimeIndex {
        &self.index
    }

    pub fn target_name(&self) -> &str {
        &self.target_name
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    /// Column values as a copied vector.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.x.column(j).iter().copied().collect()
    }

    /// Sub-dataset over a contiguous row range.
    pub fn rows(&self, range: std::ops::Range<usize>) -> Result<Self> {
        if range.end > self.n() || range.start >= range.end {
            return Err(Error::InvalidInput(format!(
                "row range {range:?} invalid for dataset with {} rows",
                self.n()
            )));
        }
        Dataset::new(
            self.index.slice(range.clone()),
            self.target_name.clone(),
            DVector::from_iterator(range.len(), range.clone().map(|i| self.y[i])),
            self.x.rows(range.start, range.len()).into_owned(),
            self.column_names.clone(),
        )
    }

    /// Sub-dataset keeping only the given predictor columns (in the given order).
    pub fn select_columns(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::InvalidInput("must keep at least one column".into()));
        }
        let mut x = DMatrix::zeros(self.n(), keep.len());
        let mut names = Vec::with_capacity(keep.len());
        for (slot, &j) in keep.iter().enumerate() {
            if j >= self.p() {
                return Err(Error::DimensionMismatch(format!(
                    "column index {j} out of range for p={}",
                    self.p()
                )));
            }
            x.set_column(slot, &self.x.column(j));
            names.push(self.column_names[j].clone());
        }
        Dataset::new(
            self.index.clone(),
            self.target_name.clone(),
            self.y.clone(),
            x,
            names,
        )
    }
}

/// Per-column affine transform parameters recorded by [`standardize`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardization {
    pub means: Vec<f64>,
    pub scales: Vec<f64>,
    pub target_mean: f64,
}

/// Which estimator produced a [`FitResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Ols,
    Ridge,
    Lasso,
    AdaptiveLasso,
    VwLasso,
}

impl ModelKind {
    pub fn label(&self) -> &'static str {
        match self {
            ModelKind::Ols => "ols",
            ModelKind::Ridge => "ridge",
            ModelKind::Lasso => "lasso",
            ModelKind::AdaptiveLasso => "adaptive_lasso",
            ModelKind::VwLasso => "vw_lasso",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ols" => Some(ModelKind::Ols),
            "ridge" => Some(ModelKind::Ridge),
            "lasso" => Some(ModelKind::Lasso),
            "adaptive_lasso" => Some(ModelKind::AdaptiveLasso),
            "vw_lasso" => Some(ModelKind::VwLasso),
            _ => None,
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// One fitted linear model. Coefficients are in the units of the dataset the
/// model was fit on; [`destandardize_fit`] maps a fit on standardized data
/// back to raw units.
///
/// `weights_used` is populated for the weighted penalties (adaptive and
/// volatility-weighted lasso). An entry of `f64::INFINITY` marks a variable
/// that was hard-excluded (its coefficient is exactly zero).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub intercept: f64,
    pub coefficients: Vec<f64>,
    pub model_kind: ModelKind,
    pub lambda: f64,
    #[serde(with = "weights_used_serde")]
    pub weights_used: Option<Vec<f64>>,
    pub iterations: usize,
    pub converged: bool,
}

/// JSON has no infinity, so hard-exclusion weights round-trip as null.
mod weights_used_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(w: &Option<Vec<f64>>, s: S) -> Result<S::Ok, S::Error> {
        let mapped: Option<Vec<Option<f64>>> = w
            .as_ref()
            .map(|v| v.iter().map(|x| x.is_finite().then_some(*x)).collect());
        mapped.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<f64>>, D::Error> {
        let mapped = Option::<Vec<Option<f64>>>::deserialize(d)?;
        Ok(mapped.map(|v| v.into_iter().map(|x| x.unwrap_or(f64::INFINITY)).collect()))
    }
}

impl FitResult {
    pub fn p(&self) -> usize {
        self.coefficients.len()
    }

    /// Count of coefficients that are exactly zero.
    pub fn zero_count(&self) -> usize {
        self.coefficients.iter().filter(|c| **c == 0.0).count()
    }

    /// Indices of nonzero coefficients.
    pub fn support(&self) -> Vec<usize> {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(j, _)| j)
            .collect()
    }
}

/// Standardizes predictors to mean 0 / sample sd 1 and demeans the target.
///
/// Sample standard deviation uses the n−1 denominator. Returns the transformed
/// dataset and the parameters needed to undo the transform.
pub fn standardize(d: &Dataset) -> Result<(Dataset, Standardization)> {
    let n = d.n();
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "standardization needs at least 2 rows, got {n}"
        )));
    }
    let p = d.p();
    let mut means = Vec::with_capacity(p);
    let mut scales = Vec::with_capacity(p);
    let mut x = d.x().clone();
    for j in 0..p {
        let col = d.x().column(j);
        let mean = col.sum() / n as f64;
        let ss: f64 = col.iter().map(|v| (v - mean) * (v - mean)).sum();
        let sd = (ss / (n as f64 - 1.0)).sqrt();
        if sd < 1e-12 {
            return Err(Error::ConstantColumn(d.column_names()[j].clone()));
        }
        for i in 0..n {
            x[(i, j)] = (d.x()[(i, j)] - mean) / sd;
        }
        means.push(mean);
        scales.push(sd);
    }
    let target_mean = d.y().sum() / n as f64;
    let y = DVector::from_iterator(n, d.y().iter().map(|v| v - target_mean));
    let std = Standardization {
        means,
        scales,
        target_mean,
    };
    let out = Dataset::new(
        d.index().clone(),
        d.target_name().to_string(),
        y,
        x,
        d.column_names().to_vec(),
    )?;
    Ok((out, std))
}

impl Standardization {
    pub fn p(&self) -> usize {
        self.means.len()
    }

    /// Applies the recorded (train-data) transform to another dataset,
    /// e.g. a test split.
    pub fn apply(&self, d: &Dataset) -> Result<Dataset> {
        if d.p() != self.p() {
            return Err(Error::DimensionMismatch(format!(
                "standardization has {} columns, dataset has {}",
                self.p(),
                d.p()
            )));
        }
        let n = d.n();
        let mut x = d.x().clone();
        for j in 0..self.p() {
            for i in 0..n {
                x[(i, j)] = (d.x()[(i, j)] - self.means[j]) / self.scales[j];
            }
        }
        let y = DVector::from_iterator(n, d.y().iter().map(|v| v - self.target_mean));
        Dataset::new(
            d.index().clone(),
            d.target_name().to_string(),
            y,
            x,
            d.column_names().to_vec(),
        )
    }
}

/// Maps a fit produced on standardized data back to raw units, so that its
/// predictions on raw rows equal the standardized fit's predictions on
/// standardized rows.
pub fn destandardize_fit(f: &FitResult, s: &Standardization) -> Result<FitResult> {
    if f.p() != s.p() {
        return Err(Error::DimensionMismatch(format!(
            "fit has {} coefficients, standardization has {} columns",
            f.p(),
            s.p()
        )));
    }
    let mut coefficients = Vec::with_capacity(f.p());
    let mut intercept = s.target_mean + f.intercept;
    for j in 0..f.p() {
        let raw = f.coefficients[j] / s.scales[j];
        coefficients.push(raw);
        intercept -= raw * s.means[j];
    }
    Ok(FitResult {
        intercept,
        coefficients,
        ..f.clone()
    })
}

/// Predicts `ŷ_t = β_0 + Σ_j β_j x_{j,t}` for each row of `x_rows`.
pub fn predict(f: &FitResult, x_rows: &DMatrix<f64>) -> Result<DVector<f64>> {
    if x_rows.ncols() != f.p() {
        return Err(Error::DimensionMismatch(format!(
            "fit has {} coefficients but matrix has {} columns",
            f.p(),
            x_rows.ncols()
        )));
    }
    let beta = DVector::from_column_slice(&f.coefficients);
    let mut out = x_rows * beta;
    out.add_scalar_mut(f.intercept);
    Ok(out)
}

//! Exact SHAP attribution for linear fits.
//!
//! For a linear model f(x) = b + Σ_j c_j x_j and background means μ, the
//! Shapley value of feature j at row x is c_j·(x_j − μ_j), independent of
//! coalition order. Attributions therefore sum exactly to the prediction
//! minus the base value b + Σ_j c_j μ_j.

use serde::{Deserialize, Serialize};

use crate::core::{Dataset, FitResult};
use crate::error::{Error, Result};

/// Per-row, per-variable attributions for one fit over one dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapMatrix {
    /// Row-major: `values[t][j]` attributes row t's prediction to variable j.
    pub values: Vec<Vec<f64>>,
    /// Expected prediction at the background point.
    pub base_value: f64,
    pub column_names: Vec<String>,
}

impl ShapMatrix {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn p(&self) -> usize {
        self.column_names.len()
    }

    /// Mean absolute attribution per variable, in column order.
    pub fn mean_abs(&self) -> Vec<f64> {
        let p = self.p();
        let mut acc = vec![0.0; p];
        for row in &self.values {
            for (j, v) in row.iter().enumerate() {
                acc[j] += v.abs();
            }
        }
        let n = self.values.len().max(1) as f64;
        acc.iter_mut().for_each(|a| *a /= n);
        acc
    }
}

/// Computes attributions for every row of `d` against the given background
/// means (typically training-sample predictor means).
pub fn linear_shap(f: &FitResult, d: &Dataset, background_means: &[f64]) -> Result<ShapMatrix> {
    if f.p() != d.p() {
        return Err(Error::DimensionMismatch(format!(
            "fit has {} coefficients but dataset has {} predictors",
            f.p(),
            d.p()
        )));
    }
    if background_means.len() != d.p() {
        return Err(Error::LengthMismatch {
            expected: d.p(),
            got: background_means.len(),
        });
    }
    if background_means.iter().any(|m| !m.is_finite()) {
        return Err(Error::InvalidInput("background means must be finite".into()));
    }
    let mut values = Vec::with_capacity(d.n());
    for t in 0..d.n() {
        let row: Vec<f64> = (0..d.p())
            .map(|j| f.coefficients[j] * (d.x()[(t, j)] - background_means[j]))
            .collect();
        values.push(row);
    }
    let base_value = f.intercept
        + f.coefficients
            .iter()
            .zip(background_means.iter())
            .map(|(c, m)| c * m)
            .sum::<f64>();
    Ok(ShapMatrix {
        values,
        base_value,
        column_names: d.column_names().to_vec(),
    })
}

/// Variables ordered by descending mean |SHAP|; ties keep column order.
pub fn importance_ranking(s: &ShapMatrix) -> Vec<(String, f64)> {
    let scores = s.mean_abs();
    let mut order: Vec<usize> = (0..s.p()).collect();
    // stable sort, so equal scores stay in column order
    order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).expect("finite scores"));
    order
        .into_iter()
        .map(|j| (s.column_names[j].clone(), scores[j]))
        .collect()
}

/// Column means of the predictor block, the usual background point.
pub fn column_means(d: &Dataset) -> Vec<f64> {
    (0..d.p())
        .map(|j| d.x().column(j).iter().sum::<f64>() / d.n() as f64)
        .collect()
}

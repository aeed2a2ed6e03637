//! Chronological train/test evaluation: floor-boundary splits, MAE/RMSE, and
//! the five-model backtest grid (OLS, lasso, ridge, adaptive lasso,
//! volatility-weighted lasso) across several training fractions.
//!
//! Everything downstream of the split touches train data only: the
//! standardization, the volatility weights, and every λ selection are
//! computed on the training rows, then applied to raw test rows.

use serde::{Deserialize, Serialize};

use crate::core::{
    destandardize_fit, predict, standardize, Dataset, FitResult, ModelKind,
};
use crate::error::{Error, Result};
use crate::garch::{volatility_weights, GarchOptions, PenaltyWeights, VolTransform};
use crate::penalized::{
    fit_adaptive_lasso_auto, fit_lasso_auto, fit_ols, fit_ridge, fit_vw_lasso_auto,
    select_ridge_lambda, SolverConfig,
};

/// Fractional chronological split with floor boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
}

impl SplitSpec {
    pub fn new(train_fraction: f64) -> Result<Self> {
        if !(train_fraction > 0.0 && train_fraction < 1.0) {
            return Err(Error::InvalidInput(format!(
                "train_fraction must lie strictly inside (0,1), got {train_fraction}"
            )));
        }
        Ok(Self { train_fraction })
    }

    /// Train size for n rows: floor(n·fraction), with a tiny epsilon so that
    /// fractions like 0.7 (not exactly representable) do not floor one short.
    pub fn train_size(&self, n: usize) -> usize {
        (n as f64 * self.train_fraction + 1e-9).floor() as usize
    }
}

/// Splits into (first ⌊n·fraction⌋ rows, remainder), preserving order.
/// The train side must keep at least p+2 rows and the test side at least 1.
pub fn chronological_split(d: &Dataset, s: &SplitSpec) -> Result<(Dataset, Dataset)> {
    let n = d.n();
    let train = s.train_size(n);
    let test = n - train;
    let min_train = d.p() + 2;
    if train < min_train || test < 1 {
        return Err(Error::SplitTooSmall {
            train,
            test,
            min_train,
        });
    }
    Ok((d.rows(0..train)?, d.rows(train..n)?))
}

/// Mean absolute error.
pub fn mae(y: &[f64], yhat: &[f64]) -> Result<f64> {
    if y.len() != yhat.len() {
        return Err(Error::LengthMismatch {
            expected: y.len(),
            got: yhat.len(),
        });
    }
    if y.is_empty() {
        return Err(Error::InvalidInput("mae needs at least one observation".into()));
    }
    Ok(y.iter().zip(yhat.iter()).map(|(a, b)| (a - b).abs()).sum::<f64>() / y.len() as f64)
}

/// Root mean squared error.
pub fn rmse(y: &[f64], yhat: &[f64]) -> Result<f64> {
    if y.len() != yhat.len() {
        return Err(Error::LengthMismatch {
            expected: y.len(),
            got: yhat.len(),
        });
    }
    if y.is_empty() {
        return Err(Error::InvalidInput("rmse needs at least one observation".into()));
    }
    Ok(
        (y.iter().zip(yhat.iter()).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()
            / y.len() as f64)
            .sqrt(),
    )
}

/// Volatility-weighting settings used by the backtest's VW column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VolWeightConfig {
    pub gamma: f64,
    pub transform: VolTransform,
    pub garch: GarchOptions,
}

impl Default for VolWeightConfig {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            transform: VolTransform::Diff,
            garch: GarchOptions::default(),
        }
    }
}

/// One (model, fraction) cell of the backtest grid. Failed cells keep their
/// position with empty metrics and the failure message in `error`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BacktestRow {
    pub model: ModelKind,
    pub train_fraction: f64,
    pub mae: Option<f64>,
    pub rmse: Option<f64>,
    /// Chosen penalty level for the penalized models; absent for OLS and
    /// for failed cells.
    pub lambda: Option<f64>,
    /// Raw-scale fit behind the row, kept for coefficient export and
    /// attribution; absent for failed cells.
    pub fit: Option<FitResult>,
    pub error: Option<String>,
}

/// Full backtest output: model-major rows over the fraction grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BacktestReport {
    pub dataset_name: String,
    pub seed: u64,
    pub rows: Vec<BacktestRow>,
}

pub const BACKTEST_MODELS: [ModelKind; 5] = [
    ModelKind::Ols,
    ModelKind::Lasso,
    ModelKind::Ridge,
    ModelKind::AdaptiveLasso,
    ModelKind::VwLasso,
];

struct FractionOutcome {
    train_fraction: f64,
    cells: Vec<(ModelKind, Result<(FitResult, Option<f64>)>)>,
    test_y: Vec<f64>,
    test_x: nalgebra::DMatrix<f64>,
}

fn run_fraction(
    d: &Dataset,
    fraction: f64,
    solver_cfg: &SolverConfig,
    vw: &VolWeightConfig,
    fixed_weights: Option<&PenaltyWeights>,
) -> Result<FractionOutcome> {
    let spec = SplitSpec::new(fraction)?;
    let (train, test) = chronological_split(d, &spec)?;
    let test_y: Vec<f64> = test.y().iter().copied().collect();
    let test_x = test.x().clone();

    let prep = standardize(&train);
    let mut cells: Vec<(ModelKind, Result<(FitResult, Option<f64>)>)> = Vec::with_capacity(5);
    match prep {
        Err(e) => {
            // without train standardization no model can proceed
            let msg = e.to_string();
            for model in BACKTEST_MODELS {
                cells.push((model, Err(Error::InvalidInput(msg.clone()))));
            }
        }
        Ok((std_train, info)) => {
            for model in BACKTEST_MODELS {
                let outcome = (|| -> Result<(FitResult, Option<f64>)> {
                    let (fit_std, lambda) = match model {
                        ModelKind::Ols => (fit_ols(&std_train)?, None),
                        ModelKind::Lasso => {
                            let (f, path) = fit_lasso_auto(&std_train, solver_cfg)?;
                            (f, Some(path.chosen_lambda()))
                        }
                        ModelKind::Ridge => {
                            let path = select_ridge_lambda(&std_train, solver_cfg)?;
                            (fit_ridge(&std_train, path.chosen_lambda())?, Some(path.chosen_lambda()))
                        }
                        ModelKind::AdaptiveLasso => {
                            let (f, path) = fit_adaptive_lasso_auto(&std_train, solver_cfg)?;
                            (f, Some(path.chosen_lambda()))
                        }
                        ModelKind::VwLasso => {
                            let w = match fixed_weights {
                                Some(w) => w.clone(),
                                None => volatility_weights(
                                    &std_train,
                                    vw.gamma,
                                    vw.transform,
                                    &vw.garch,
                                )?,
                            };
                            let (f, path) = fit_vw_lasso_auto(&std_train, &w, solver_cfg)?;
                            (f, Some(path.chosen_lambda()))
                        }
                    };
                    Ok((destandardize_fit(&fit_std, &info)?, lambda))
                })();
                cells.push((model, outcome));
            }
        }
    }
    Ok(FractionOutcome {
        train_fraction: fraction,
        cells,
        test_y,
        test_x,
    })
}

/// Runs the five-model backtest over the given training fractions.
///
/// Rows come out model-major (all fractions of OLS, then lasso, ...). A model
/// that fails on some fraction contributes an error row there; the rest of
/// the grid is unaffected.
pub fn run_backtest(
    d: &Dataset,
    fractions: &[f64],
    solver_cfg: &SolverConfig,
    vw: &VolWeightConfig,
) -> Result<BacktestReport> {
    run_backtest_with(d, fractions, solver_cfg, vw, None)
}

/// [`run_backtest`] with externally supplied volatility weights. The weights
/// are applied to every split as-is instead of being refit on each training
/// window, so the caller owns any leakage implications.
pub fn run_backtest_with(
    d: &Dataset,
    fractions: &[f64],
    solver_cfg: &SolverConfig,
    vw: &VolWeightConfig,
    fixed_weights: Option<&PenaltyWeights>,
) -> Result<BacktestReport> {
    solver_cfg.validate()?;
    if fractions.is_empty() {
        return Err(Error::InvalidInput("need at least one training fraction".into()));
    }
    if let Some(w) = fixed_weights {
        w.validate()?;
        if w.p() != d.p() {
            return Err(Error::LengthMismatch {
                expected: d.p(),
                got: w.p(),
            });
        }
    }
    let mut by_fraction = Vec::with_capacity(fractions.len());
    for &f in fractions {
        by_fraction.push(run_fraction(d, f, solver_cfg, vw, fixed_weights)?);
    }

    let mut rows = Vec::with_capacity(5 * fractions.len());
    for (m, model) in BACKTEST_MODELS.iter().enumerate() {
        for outcome in &by_fraction {
            let (cell_model, cell) = &outcome.cells[m];
            debug_assert_eq!(cell_model, model);
            let row = match cell {
                Ok((fit, lambda)) => {
                    let pred = predict(fit, &outcome.test_x)?;
                    let pred: Vec<f64> = pred.iter().copied().collect();
                    BacktestRow {
                        model: *model,
                        train_fraction: outcome.train_fraction,
                        mae: Some(mae(&outcome.test_y, &pred)?),
                        rmse: Some(rmse(&outcome.test_y, &pred)?),
                        lambda: *lambda,
                        fit: Some(fit.clone()),
                        error: None,
                    }
                }
                Err(e) => BacktestRow {
                    model: *model,
                    train_fraction: outcome.train_fraction,
                    mae: None,
                    rmse: None,
                    lambda: None,
                    fit: None,
                    error: Some(e.to_string()),
                },
            };
            rows.push(row);
        }
    }
    Ok(BacktestReport {
        dataset_name: d.target_name().to_string(),
        seed: vw.garch.seed,
        rows,
    })
}

impl BacktestReport {
    /// Mean over fractions of a metric for one model, skipping error rows.
    /// Returns None if the model has no successful rows.
    pub fn mean_metric(&self, model: ModelKind, metric: impl Fn(&BacktestRow) -> Option<f64>) -> Option<f64> {
        let vals: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.model == model)
            .filter_map(metric)
            .collect();
        if vals.is_empty() {
            None
        } else {
            Some(vals.iter().sum::<f64>() / vals.len() as f64)
        }
    }
}

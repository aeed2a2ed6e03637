//! Volatility-weighted lasso toolkit for small-sample time-series regression.
//!
//! The centerpiece is a lasso variant whose per-variable penalty weights come
//! from GARCH(1,1) conditional volatility estimates: calmer predictors are
//! penalized harder, more volatile ones less, before a single shared λ is
//! chosen by information criterion or rolling-origin cross-validation.
//! Baselines (OLS, ridge, plain lasso, adaptive lasso), a synthetic
//! heteroskedastic data generator, a chronological backtest harness, and
//! linear SHAP attributions round out the toolkit.
//!
//! Start with the runnable examples:
//!
//! ```text
//! cargo run --release --example fit_models
//! cargo run --release --example volatility_weights
//! cargo run --release --example backtest
//! ```
//!
//! or the batch CLI (`vwlasso simulate|garch|fit|backtest|explain`).

pub mod cli;
pub mod core;
pub mod error;
pub mod evaluate;
pub mod explain;
pub mod garch;
pub mod io;
pub mod penalized;
pub mod simulate;

pub use crate::core::{
    destandardize_fit, predict, standardize, Dataset, FitResult, ModelKind, Standardization,
    TimeIndex,
};
pub use crate::error::{Error, Result};

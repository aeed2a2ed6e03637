//! Coordinate-descent solvers for the weighted lasso family and λ selection.
//!
//! Everything minimizes variants of
//!
//! (1/2n)·‖y − β₀ − Xβ‖² + λ·Σ_j w_j·|β_j|
//!
//! over a demeaned problem (the intercept is never penalized; it is absorbed
//! by centering y and the columns of X before solving and reconstructed
//! afterwards). Plain lasso is w ≡ 1, adaptive lasso takes w_j = 1/|β̂_j|^γ
//! from a first-stage fit, and the volatility-weighted lasso takes w from
//! GARCH(1,1) conditional volatilities.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::core::{Dataset, FitResult, ModelKind};
use crate::error::{Error, Result};
use crate::garch::{PenaltyWeights, WeightSource};

/// How λ is scored along the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    Bic,
    Aic,
    RollingCv,
}

impl Selection {
    pub fn label(&self) -> &'static str {
        match self {
            Selection::Bic => "bic",
            Selection::Aic => "aic",
            Selection::RollingCv => "rolling_cv",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "bic" => Some(Selection::Bic),
            "aic" => Some(Selection::Aic),
            "rolling_cv" => Some(Selection::RollingCv),
            _ => None,
        }
    }
}

impl std::fmt::Display for Selection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Solver and λ-selection settings shared across the penalized fits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Coordinate-descent sweep cap.
    pub max_iterations: usize,
    /// Sweep converges when the largest absolute coefficient change is below this.
    pub tolerance: f64,
    pub lambda_grid_size: usize,
    /// Grid runs from λ_max down to λ_max·lambda_min_ratio.
    pub lambda_min_ratio: f64,
    pub selection: Selection,
    pub cv_folds: usize,
    /// Exponent γ in the adaptive weights 1/|β̂_j|^γ.
    pub gamma_adaptive: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iterations: 10_000,
            tolerance: 1e-8,
            lambda_grid_size: 100,
            lambda_min_ratio: 1e-4,
            selection: Selection::Bic,
            cv_folds: 5,
            gamma_adaptive: 1.0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidInput("max_iterations must be at least 1".into()));
        }
        if !(self.lambda_min_ratio > 0.0 && self.lambda_min_ratio < 1.0) {
            return Err(Error::InvalidInput(format!(
                "lambda_min_ratio must lie in (0,1), got {}",
                self.lambda_min_ratio
            )));
        }
        if self.lambda_grid_size == 0 {
            return Err(Error::InvalidInput("lambda_grid_size must be at least 1".into()));
        }
        if self.cv_folds == 0 {
            return Err(Error::InvalidInput("cv_folds must be at least 1".into()));
        }
        if !self.gamma_adaptive.is_finite() {
            return Err(Error::InvalidInput("gamma_adaptive must be finite".into()));
        }
        Ok(())
    }
}

/// A decreasing λ grid with per-λ selection scores and the chosen entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaPath {
    pub lambdas: Vec<f64>,
    pub scores: Vec<f64>,
    pub chosen_index: usize,
}

impl LambdaPath {
    pub fn chosen_lambda(&self) -> f64 {
        self.lambdas[self.chosen_index]
    }
}

/// sign(z)·max(|z|−t, 0), the proximal map of t·|·|.
pub fn soft_threshold(z: f64, t: f64) -> f64 {
    debug_assert!(t >= 0.0);
    if z > t {
        z - t
    } else if z < -t {
        z + t
    } else {
        0.0
    }
}

struct Centered {
    x: DMatrix<f64>,
    y: DVector<f64>,
    x_means: Vec<f64>,
    y_mean: f64,
}

fn center(d: &Dataset) -> Centered {
    let n = d.n();
    let p = d.p();
    let mut x = d.x().clone();
    let mut x_means = Vec::with_capacity(p);
    for j in 0..p {
        let mean = d.x().column(j).sum() / n as f64;
        for i in 0..n {
            x[(i, j)] -= mean;
        }
        x_means.push(mean);
    }
    let y_mean = d.y().sum() / n as f64;
    let y = DVector::from_iterator(n, d.y().iter().map(|v| v - y_mean));
    Centered { x, y, x_means, y_mean }
}

fn intercept_from(beta: &[f64], c: &Centered) -> f64 {
    let mut b0 = c.y_mean;
    for (j, b) in beta.iter().enumerate() {
        b0 -= b * c.x_means[j];
    }
    b0
}

/// Ordinary least squares via SVD on the centered design.
///
/// Requires n > p and a condition number below 1e12.
pub fn fit_ols(d: &Dataset) -> Result<FitResult> {
    let (n, p) = (d.n(), d.p());
    if n <= p {
        return Err(Error::RankDeficient(format!(
            "need more rows than predictors, got n={n}, p={p}"
        )));
    }
    let c = center(d);
    let svd = c.x.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= 0.0 || smax / smin >= 1e12 {
        return Err(Error::RankDeficient(format!(
            "design condition number {:.3e} exceeds 1e12",
            if smin > 0.0 { smax / smin } else { f64::INFINITY }
        )));
    }
    let beta = svd
        .solve(&c.y, 0.0)
        .map_err(|e| Error::RankDeficient(e.to_string()))?;
    let coefficients: Vec<f64> = beta.iter().copied().collect();
    Ok(FitResult {
        intercept: intercept_from(&coefficients, &c),
        coefficients,
        model_kind: ModelKind::Ols,
        lambda: 0.0,
        weights_used: None,
        iterations: 0,
        converged: true,
    })
}

/// Ridge regression minimizing ‖y−β₀−Xβ‖²/(2n) + λ‖β‖², solved in closed
/// form via (XᵀX/n + 2λI)β = Xᵀy/n on the centered design.
pub fn fit_ridge(d: &Dataset, lambda: f64) -> Result<FitResult> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "ridge lambda must be nonnegative, got {lambda}"
        )));
    }
    let n = d.n() as f64;
    let c = center(d);
    let mut gram = c.x.transpose() * &c.x / n;
    for j in 0..d.p() {
        gram[(j, j)] += 2.0 * lambda;
    }
    let rhs = c.x.transpose() * &c.y / n;
    let beta = match gram.clone().cholesky() {
        Some(ch) => ch.solve(&rhs),
        None => gram
            .svd(true, true)
            .solve(&rhs, 0.0)
            .map_err(|e| Error::RankDeficient(e.to_string()))?,
    };
    let coefficients: Vec<f64> = beta.iter().copied().collect();
    Ok(FitResult {
        intercept: intercept_from(&coefficients, &c),
        coefficients,
        model_kind: ModelKind::Ridge,
        lambda,
        weights_used: None,
        iterations: 0,
        converged: true,
    })
}

fn model_kind_for(source: WeightSource) -> ModelKind {
    match source {
        WeightSource::Unit => ModelKind::Lasso,
        WeightSource::Adaptive => ModelKind::AdaptiveLasso,
        WeightSource::Volatility => ModelKind::VwLasso,
    }
}

/// (1/2n)‖y − β₀ − Xβ‖² + λΣw_j|β_j| for a fit on its dataset.
pub fn weighted_lasso_objective(d: &Dataset, fit: &FitResult, lambda: f64, w: &PenaltyWeights) -> f64 {
    let pred = crate::core::predict(fit, d.x()).expect("dimension checked by caller");
    let n = d.n() as f64;
    let rss: f64 = d
        .y()
        .iter()
        .zip(pred.iter())
        .map(|(y, f)| (y - f) * (y - f))
        .sum();
    let penalty: f64 = fit
        .coefficients
        .iter()
        .zip(w.weights.iter())
        .map(|(b, wj)| wj * b.abs())
        .sum();
    rss / (2.0 * n) + lambda * penalty
}

/// Largest KKT violation of the weighted lasso conditions at `fit`:
/// for β_j ≠ 0 the score x_jᵀ(y−ŷ)/n must equal λ·w_j·sign(β_j); for
/// β_j = 0 its magnitude must not exceed λ·w_j. Zero-weight coordinates
/// require exact orthogonality.
pub fn kkt_violation(d: &Dataset, fit: &FitResult, lambda: f64, w: &PenaltyWeights) -> f64 {
    let pred = crate::core::predict(fit, d.x()).expect("dimension checked by caller");
    let n = d.n() as f64;
    let resid = d.y() - pred;
    let mut worst = 0.0f64;
    for j in 0..d.p() {
        let score = d.x().column(j).dot(&resid) / n;
        let bound = lambda * w.weights[j];
        let v = if fit.coefficients[j] != 0.0 {
            (score - bound * fit.coefficients[j].signum()).abs()
        } else {
            (score.abs() - bound).max(0.0)
        };
        worst = worst.max(v);
    }
    worst
}

/// Smallest λ at which the all-zero solution is optimal, given weights:
/// max_j |x_jᵀy| / (n·w_j) over the positively weighted coordinates, nudged
/// up by a few ulps so that round-tripping λ·w_j back past the division
/// cannot fall below the score.
pub fn lambda_max(d: &Dataset, w: &PenaltyWeights) -> Result<f64> {
    w.validate()?;
    if w.p() != d.p() {
        return Err(Error::DimensionMismatch(format!(
            "{} weights for {} columns",
            w.p(),
            d.p()
        )));
    }
    if w.weights.iter().any(|wj| *wj == 0.0) {
        return Err(Error::InvalidWeights(
            "lambda_max is undefined with zero weights (those coordinates are never zeroed)".into(),
        ));
    }
    let c = center(d);
    let n = d.n() as f64;
    let mut lam = 0.0f64;
    for j in 0..d.p() {
        let score = c.x.column(j).dot(&c.y).abs() / n;
        lam = lam.max(score / w.weights[j]);
    }
    if lam <= 0.0 {
        // target already orthogonal to every column; any positive λ keeps zeros
        lam = 1e-12;
    }
    Ok(lam * (1.0 + 1e-12))
}

/// Cyclic coordinate descent for the weighted lasso, warm-started at `beta0`.
///
/// Convergence is declared when the largest absolute coefficient update in a
/// full sweep falls below `cfg.tolerance`. A non-converged run returns
/// `Error::NotConverged` carrying the last iterate; `accept_last_iterate`
/// unwraps it when the caller prefers the approximate solution.
pub fn fit_weighted_lasso_warm(
    d: &Dataset,
    lambda: f64,
    w: &PenaltyWeights,
    cfg: &SolverConfig,
    beta0: &[f64],
) -> Result<FitResult> {
    cfg.validate()?;
    w.validate()?;
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "lambda must be nonnegative and finite, got {lambda}"
        )));
    }
    let (n, p) = (d.n(), d.p());
    if w.p() != p {
        return Err(Error::DimensionMismatch(format!(
            "{} weights for {} columns",
            w.p(),
            p
        )));
    }
    if beta0.len() != p {
        return Err(Error::DimensionMismatch(format!(
            "warm start has {} coefficients for {} columns",
            beta0.len(),
            p
        )));
    }
    let c = center(d);
    let nf = n as f64;
    let col_norms: Vec<f64> = (0..p).map(|j| c.x.column(j).norm_squared() / nf).collect();

    let mut beta: Vec<f64> = beta0.to_vec();
    // residual r = y_c − X_c β for the warm start
    let mut r = c.y.clone();
    for j in 0..p {
        if beta[j] != 0.0 {
            r -= c.x.column(j) * beta[j];
        }
    }

    let mut iterations = 0;
    let mut converged = false;
    #[cfg(debug_assertions)]
    let mut last_objective = f64::INFINITY;
    while iterations < cfg.max_iterations {
        iterations += 1;
        let mut max_delta = 0.0f64;
        for j in 0..p {
            if col_norms[j] <= 1e-300 {
                // centered column is identically zero; leave its coefficient alone
                continue;
            }
            let z = c.x.column(j).dot(&r) / nf + col_norms[j] * beta[j];
            let new = if w.weights[j] == 0.0 {
                z / col_norms[j]
            } else {
                soft_threshold(z, lambda * w.weights[j]) / col_norms[j]
            };
            let delta = new - beta[j];
            if delta != 0.0 {
                r -= c.x.column(j) * delta;
                beta[j] = new;
                max_delta = max_delta.max(delta.abs());
            }
        }
        #[cfg(debug_assertions)]
        {
            // objective must never increase across sweeps
            let rss = r.norm_squared();
            let pen: f64 = beta
                .iter()
                .zip(w.weights.iter())
                .map(|(b, wj)| wj * b.abs())
                .sum();
            let obj = rss / (2.0 * nf) + lambda * pen;
            debug_assert!(
                obj <= last_objective + 1e-10 * (1.0 + last_objective.abs()),
                "objective rose from {last_objective} to {obj}"
            );
            last_objective = obj;
        }
        if max_delta < cfg.tolerance {
            converged = true;
            break;
        }
    }

    let fit = FitResult {
        intercept: intercept_from(&beta, &c),
        coefficients: beta,
        model_kind: model_kind_for(w.source),
        lambda,
        weights_used: Some(w.weights.clone()),
        iterations,
        converged,
    };
    if !converged {
        return Err(Error::NotConverged(Box::new(fit)));
    }
    #[cfg(debug_assertions)]
    if cfg.tolerance <= 1e-6 {
        let viol = kkt_violation(d, &fit, lambda, w);
        debug_assert!(viol <= 1e-6, "KKT violation {viol} above certificate slack");
    }
    Ok(fit)
}

/// Weighted lasso from a cold (all-zero) start.
pub fn fit_weighted_lasso(
    d: &Dataset,
    lambda: f64,
    w: &PenaltyWeights,
    cfg: &SolverConfig,
) -> Result<FitResult> {
    fit_weighted_lasso_warm(d, lambda, w, cfg, &vec![0.0; d.p()])
}

/// Plain lasso: the weighted solver with unit weights.
pub fn fit_lasso(d: &Dataset, lambda: f64, cfg: &SolverConfig) -> Result<FitResult> {
    fit_weighted_lasso(d, lambda, &PenaltyWeights::unit(d.p()), cfg)
}

/// Volatility-weighted lasso: the weighted solver with GARCH-derived weights.
pub fn fit_vw_lasso(
    d: &Dataset,
    lambda: f64,
    w: &PenaltyWeights,
    cfg: &SolverConfig,
) -> Result<FitResult> {
    if w.source != WeightSource::Volatility {
        return Err(Error::InvalidWeights(format!(
            "fit_vw_lasso expects volatility-sourced weights, got {:?}",
            w.source
        )));
    }
    fit_weighted_lasso(d, lambda, w, cfg)
}

/// First-stage coefficients for the adaptive lasso: OLS when the sample is
/// comfortably larger than the predictor count and well conditioned,
/// otherwise a BIC-selected plain lasso.
fn adaptive_initial_fit(d: &Dataset, cfg: &SolverConfig) -> Result<FitResult> {
    if d.n() > 2 * d.p() {
        match fit_ols(d) {
            Ok(fit) => return Ok(fit),
            Err(Error::RankDeficient(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let mut stage_cfg = *cfg;
    stage_cfg.selection = Selection::Bic;
    let w = PenaltyWeights::unit(d.p());
    let path = select_lambda(d, &w, &stage_cfg)?;
    fit_weighted_lasso(d, path.chosen_lambda(), &w, &stage_cfg)
}

/// Adaptive lasso: weights w_j = 1/|β̂_j|^γ from a first-stage fit.
///
/// Variables whose initial coefficient is below 1e-10 in magnitude are
/// excluded outright: the second stage solves the reduced problem and the
/// returned fit reports coefficient 0 and weight `f64::INFINITY` for them.
/// When every initial coefficient vanishes the result is the all-zero fit
/// with every recorded weight infinite, not an error.
pub fn fit_adaptive_lasso(d: &Dataset, lambda: f64, cfg: &SolverConfig) -> Result<FitResult> {
    cfg.validate()?;
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "lambda must be nonnegative and finite, got {lambda}"
        )));
    }
    let init = adaptive_initial_fit(d, cfg)?;
    match adaptive_stage(&init, d.p(), cfg.gamma_adaptive)? {
        None => Ok(all_excluded_fit(d, lambda)),
        Some(stage) => adaptive_solve(d, lambda, cfg, stage),
    }
}

/// Second-stage setup derived from a first-stage fit: which variables stay,
/// their finite weights, and the full-length vector with `INFINITY` marking
/// the hard-excluded coordinates.
struct AdaptiveStage {
    kept: Vec<usize>,
    weights: PenaltyWeights,
    full_weights: Vec<f64>,
}

fn adaptive_stage(init: &FitResult, p: usize, gamma: f64) -> Result<Option<AdaptiveStage>> {
    let mut kept = Vec::new();
    let mut kept_weights = Vec::new();
    let mut full_weights = vec![f64::INFINITY; p];
    for (j, b) in init.coefficients.iter().enumerate() {
        if b.abs() >= 1e-10 {
            let w = 1.0 / b.abs().powf(gamma);
            kept.push(j);
            kept_weights.push(w);
            full_weights[j] = w;
        }
    }
    if kept.is_empty() {
        return Ok(None);
    }
    let weights = PenaltyWeights::adaptive(kept_weights, gamma)?;
    Ok(Some(AdaptiveStage {
        kept,
        weights,
        full_weights,
    }))
}

fn all_excluded_fit(d: &Dataset, lambda: f64) -> FitResult {
    FitResult {
        intercept: d.y().sum() / d.n() as f64,
        coefficients: vec![0.0; d.p()],
        model_kind: ModelKind::AdaptiveLasso,
        lambda,
        weights_used: Some(vec![f64::INFINITY; d.p()]),
        iterations: 0,
        converged: true,
    }
}

fn expand_fit(
    d: &Dataset,
    kept: &[usize],
    sub: FitResult,
    lambda: f64,
    full_weights: Vec<f64>,
) -> FitResult {
    let mut coefficients = vec![0.0; d.p()];
    for (slot, &j) in kept.iter().enumerate() {
        coefficients[j] = sub.coefficients[slot];
    }
    FitResult {
        intercept: sub.intercept,
        coefficients,
        model_kind: ModelKind::AdaptiveLasso,
        lambda,
        weights_used: Some(full_weights),
        iterations: sub.iterations,
        converged: sub.converged,
    }
}

fn adaptive_solve(
    d: &Dataset,
    lambda: f64,
    cfg: &SolverConfig,
    stage: AdaptiveStage,
) -> Result<FitResult> {
    let sub = d.select_columns(&stage.kept)?;
    match fit_weighted_lasso(&sub, lambda, &stage.weights, cfg) {
        Ok(fit) => Ok(expand_fit(d, &stage.kept, fit, lambda, stage.full_weights)),
        Err(Error::NotConverged(fit)) => Err(Error::NotConverged(Box::new(expand_fit(
            d,
            &stage.kept,
            *fit,
            lambda,
            stage.full_weights,
        )))),
        Err(e) => Err(e),
    }
}

/// Builds the decreasing log-spaced λ grid from λ_max to λ_max·min_ratio.
fn lambda_grid(lam_max: f64, cfg: &SolverConfig) -> Vec<f64> {
    let g = cfg.lambda_grid_size;
    if g == 1 {
        return vec![lam_max];
    }
    (0..g)
        .map(|i| lam_max * cfg.lambda_min_ratio.powf(i as f64 / (g - 1) as f64))
        .collect()
}

fn information_score(selection: Selection, n: f64, rss: f64, k: usize) -> f64 {
    let rss = rss.max(1e-300);
    match selection {
        Selection::Bic => n * (rss / n).ln() + k as f64 * n.ln(),
        Selection::Aic => n * (rss / n).ln() + 2.0 * k as f64,
        Selection::RollingCv => unreachable!("cv handled separately"),
    }
}

fn argmin_prefer_first(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, s) in scores.iter().enumerate().skip(1) {
        let cur = scores[best];
        // strict improvement only, so ties keep the earlier (larger) λ;
        // NaN scores lose to anything comparable
        let better = if cur.is_nan() {
            !s.is_nan()
        } else {
            matches!(cur.partial_cmp(s), Some(std::cmp::Ordering::Greater))
        };
        if better {
            best = i;
        }
    }
    best
}

/// Boundaries of the rolling-origin folds: the sample is cut into
/// `folds + 1` consecutive segments; fold k trains on everything before
/// segment k+1 and tests on segment k+1 itself.
fn rolling_fold_bounds(n: usize, folds: usize) -> Result<Vec<(usize, usize)>> {
    let segments = folds + 1;
    if n < segments * 2 {
        return Err(Error::InvalidInput(format!(
            "rolling cv with {folds} folds needs at least {} rows, got {n}",
            segments * 2
        )));
    }
    let base = n / segments;
    let extra = n % segments;
    let mut bounds = Vec::with_capacity(segments);
    let mut start = 0;
    for s in 0..segments {
        let len = base + if s < extra { 1 } else { 0 };
        bounds.push((start, start + len));
        start += len;
    }
    Ok(bounds.into_iter().skip(1).collect())
}

/// Scores a λ grid by rolling-origin cross-validation: mean squared
/// out-of-fold error, folds always training strictly before their test block.
fn rolling_cv_scores(
    d: &Dataset,
    w: &PenaltyWeights,
    cfg: &SolverConfig,
    lambdas: &[f64],
) -> Result<Vec<f64>> {
    let folds = rolling_fold_bounds(d.n(), cfg.cv_folds)?;
    let mut sq_err = vec![0.0f64; lambdas.len()];
    let mut count = 0usize;
    for (test_start, test_end) in folds {
        let train = d.rows(0..test_start)?;
        let test = d.rows(test_start..test_end)?;
        count += test.n();
        let mut beta = vec![0.0; d.p()];
        for (i, &lam) in lambdas.iter().enumerate() {
            let fit = crate::error::accept_last_iterate(fit_weighted_lasso_warm(
                &train, lam, w, cfg, &beta,
            ))?;
            beta = fit.coefficients.clone();
            let pred = crate::core::predict(&fit, test.x())?;
            sq_err[i] += test
                .y()
                .iter()
                .zip(pred.iter())
                .map(|(y, f)| (y - f) * (y - f))
                .sum::<f64>();
        }
    }
    Ok(sq_err.into_iter().map(|s| s / count as f64).collect())
}

/// Scores a decreasing λ grid and picks the best entry.
///
/// BIC = n·log(RSS/n) + k·log n and AIC = n·log(RSS/n) + 2k use the exact
/// nonzero count k on the full sample; rolling CV uses mean squared
/// out-of-fold error. Ties break toward the larger λ (sparser model).
pub fn select_lambda(d: &Dataset, w: &PenaltyWeights, cfg: &SolverConfig) -> Result<LambdaPath> {
    cfg.validate()?;
    let lam_max = lambda_max(d, w)?;
    let lambdas = lambda_grid(lam_max, cfg);
    let scores = match cfg.selection {
        Selection::RollingCv => rolling_cv_scores(d, w, cfg, &lambdas)?,
        ic => {
            let n = d.n() as f64;
            let mut beta = vec![0.0; d.p()];
            let mut scores = Vec::with_capacity(lambdas.len());
            for &lam in &lambdas {
                let fit = fit_weighted_lasso_warm(d, lam, w, cfg, &beta)?;
                beta = fit.coefficients.clone();
                let pred = crate::core::predict(&fit, d.x())?;
                let rss: f64 = d
                    .y()
                    .iter()
                    .zip(pred.iter())
                    .map(|(y, f)| (y - f) * (y - f))
                    .sum();
                let k = fit.coefficients.iter().filter(|b| **b != 0.0).count();
                scores.push(information_score(ic, n, rss, k));
            }
            scores
        }
    };
    let chosen_index = argmin_prefer_first(&scores);
    Ok(LambdaPath {
        lambdas,
        scores,
        chosen_index,
    })
}

/// Ridge λ chosen on the same logarithmic grid scale as the lasso path,
/// scored by rolling-origin cross-validation (information criteria with a
/// nonzero-count penalty are uninformative for ridge, which never zeroes).
pub fn select_ridge_lambda(d: &Dataset, cfg: &SolverConfig) -> Result<LambdaPath> {
    cfg.validate()?;
    let lam_max = lambda_max(d, &PenaltyWeights::unit(d.p()))?;
    let lambdas = lambda_grid(lam_max, cfg);
    let folds = rolling_fold_bounds(d.n(), cfg.cv_folds)?;
    let mut sq_err = vec![0.0f64; lambdas.len()];
    let mut count = 0usize;
    for (test_start, test_end) in folds {
        let train = d.rows(0..test_start)?;
        let test = d.rows(test_start..test_end)?;
        count += test.n();
        for (i, &lam) in lambdas.iter().enumerate() {
            let fit = fit_ridge(&train, lam)?;
            let pred = crate::core::predict(&fit, test.x())?;
            sq_err[i] += test
                .y()
                .iter()
                .zip(pred.iter())
                .map(|(y, f)| (y - f) * (y - f))
                .sum::<f64>();
        }
    }
    let scores: Vec<f64> = sq_err.into_iter().map(|s| s / count as f64).collect();
    let chosen_index = argmin_prefer_first(&scores);
    Ok(LambdaPath {
        lambdas,
        scores,
        chosen_index,
    })
}

/// Lasso with λ chosen by `cfg.selection`.
pub fn fit_lasso_auto(d: &Dataset, cfg: &SolverConfig) -> Result<(FitResult, LambdaPath)> {
    let w = PenaltyWeights::unit(d.p());
    let path = select_lambda(d, &w, cfg)?;
    let fit = fit_weighted_lasso(d, path.chosen_lambda(), &w, cfg)?;
    Ok((fit, path))
}

/// Volatility-weighted lasso with λ chosen by `cfg.selection`.
pub fn fit_vw_lasso_auto(
    d: &Dataset,
    w: &PenaltyWeights,
    cfg: &SolverConfig,
) -> Result<(FitResult, LambdaPath)> {
    if w.source != WeightSource::Volatility {
        return Err(Error::InvalidWeights(format!(
            "fit_vw_lasso_auto expects volatility-sourced weights, got {:?}",
            w.source
        )));
    }
    let path = select_lambda(d, w, cfg)?;
    let fit = fit_weighted_lasso(d, path.chosen_lambda(), w, cfg)?;
    Ok((fit, path))
}

/// Adaptive lasso with λ chosen by `cfg.selection` on the reweighted
/// (reduced) problem. When the first stage zeroes everything, the returned
/// fit is all-zero and the path degenerates to the single unit-weight λ_max
/// with the null model's in-sample mean squared error as its score.
pub fn fit_adaptive_lasso_auto(d: &Dataset, cfg: &SolverConfig) -> Result<(FitResult, LambdaPath)> {
    cfg.validate()?;
    let init = adaptive_initial_fit(d, cfg)?;
    match adaptive_stage(&init, d.p(), cfg.gamma_adaptive)? {
        None => {
            let lam = lambda_max(d, &PenaltyWeights::unit(d.p()))?;
            let y_mean = d.y().sum() / d.n() as f64;
            let mse = d.y().iter().map(|y| (y - y_mean) * (y - y_mean)).sum::<f64>()
                / d.n() as f64;
            let path = LambdaPath {
                lambdas: vec![lam],
                scores: vec![mse],
                chosen_index: 0,
            };
            Ok((all_excluded_fit(d, lam), path))
        }
        Some(stage) => {
            let sub = d.select_columns(&stage.kept)?;
            let path = select_lambda(&sub, &stage.weights, cfg)?;
            let fit = adaptive_solve(d, path.chosen_lambda(), cfg, stage)?;
            Ok((fit, path))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::TimeIndex;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dataset(y: Vec<f64>, x: DMatrix<f64>) -> Dataset {
        let names = (1..=x.ncols()).map(|j| format!("x{j}")).collect();
        Dataset::new(
            TimeIndex::synthetic(y.len()),
            "y",
            DVector::from_vec(y),
            x,
            names,
        )
        .unwrap()
    }

    fn seeded_problem(seed: u64, n: usize, p: usize, beta: &[f64], noise: f64) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = DMatrix::from_fn(n, p, |_, _| rng.random::<f64>() * 2.0 - 1.0);
        let mut y = Vec::with_capacity(n);
        for i in 0..n {
            let mut v = 0.0;
            for j in 0..p {
                v += beta[j] * x[(i, j)];
            }
            v += noise * (rng.random::<f64>() * 2.0 - 1.0);
            y.push(v);
        }
        dataset(y, x)
    }

    #[test]
    fn soft_threshold_examples() {
        assert_eq!(soft_threshold(3.0, 1.0), 2.0);
        assert_eq!(soft_threshold(-0.5, 1.0), 0.0);
        assert_eq!(soft_threshold(-3.0, 1.0), -2.0);
        for z in [-2.5, -0.1, 0.0, 0.7, 42.0] {
            assert_eq!(soft_threshold(z, 0.0), z);
        }
        assert_eq!(soft_threshold(1.0, 1.0), 0.0);
    }

    #[test]
    fn ols_recovers_noiseless_coefficients() {
        let d = seeded_problem(1, 60, 4, &[3.0, -2.0, 0.5, 0.0], 0.0);
        let fit = fit_ols(&d).unwrap();
        let truth = [3.0, -2.0, 0.5, 0.0];
        for j in 0..4 {
            assert_relative_eq!(fit.coefficients[j], truth[j], epsilon = 1e-8);
        }
        assert!(fit.intercept.abs() < 1e-8);
    }

    #[test]
    fn ols_constant_target() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = DMatrix::from_fn(25, 3, |_, _| rng.random::<f64>());
        let d = dataset(vec![4.2; 25], x);
        let fit = fit_ols(&d).unwrap();
        for b in &fit.coefficients {
            assert!(b.abs() < 1e-10);
        }
        assert_relative_eq!(fit.intercept, 4.2, epsilon = 1e-10);
    }

    #[test]
    fn ols_matches_gaussian_elimination_oracle() {
        let d = seeded_problem(3, 50, 3, &[1.0, 2.0, 3.0], 0.8);
        let fit = fit_ols(&d).unwrap();

        // independent solve: build centered normal equations, eliminate by hand
        let n = d.n() as f64;
        let p = d.p();
        let mut xm = vec![0.0; p];
        for j in 0..p {
            xm[j] = d.x().column(j).sum() / n;
        }
        let ym = d.y().sum() / n;
        let mut a = vec![vec![0.0f64; p + 1]; p];
        for j in 0..p {
            for k in 0..p {
                let mut s = 0.0;
                for i in 0..d.n() {
                    s += (d.x()[(i, j)] - xm[j]) * (d.x()[(i, k)] - xm[k]);
                }
                a[j][k] = s;
            }
            let mut s = 0.0;
            for i in 0..d.n() {
                s += (d.x()[(i, j)] - xm[j]) * (d.y()[i] - ym);
            }
            a[j][p] = s;
        }
        for col in 0..p {
            let pivot = (col..p).max_by(|r1, r2| {
                a[*r1][col].abs().partial_cmp(&a[*r2][col].abs()).unwrap()
            });
            let pivot = pivot.unwrap();
            a.swap(col, pivot);
            for row in 0..p {
                if row != col {
                    let factor = a[row][col] / a[col][col];
                    for k in col..=p {
                        a[row][k] -= factor * a[col][k];
                    }
                }
            }
        }
        for j in 0..p {
            let oracle = a[j][p] / a[j][j];
            assert_relative_eq!(fit.coefficients[j], oracle, epsilon = 1e-8);
        }

        // normal equations: residuals orthogonal to every column
        let pred = crate::core::predict(&fit, d.x()).unwrap();
        let resid = d.y() - pred;
        for j in 0..p {
            assert!(d.x().column(j).dot(&resid).abs() / n < 1e-8);
        }
    }

    #[test]
    fn ols_rejects_rank_deficiency() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let base: Vec<f64> = (0..30).map(|_| rng.random::<f64>()).collect();
        let x = DMatrix::from_fn(30, 2, |i, j| if j == 0 { base[i] } else { 2.0 * base[i] });
        let d = dataset((0..30).map(|i| i as f64).collect(), x);
        assert!(matches!(fit_ols(&d), Err(Error::RankDeficient(_))));

        let tall = seeded_problem(5, 3, 4, &[0.0; 4], 1.0);
        assert!(matches!(fit_ols(&tall), Err(Error::RankDeficient(_))));
    }

    #[test]
    fn ridge_shrinks_everything_at_huge_lambda() {
        let d = seeded_problem(6, 40, 3, &[5.0, -4.0, 2.0], 0.1);
        let fit = fit_ridge(&d, 1e12).unwrap();
        for b in &fit.coefficients {
            assert!(b.abs() < 1e-6);
        }
    }

    #[test]
    fn ridge_at_zero_equals_ols() {
        let d = seeded_problem(7, 45, 4, &[1.0, 0.0, -2.0, 0.5], 0.5);
        let ols = fit_ols(&d).unwrap();
        let ridge = fit_ridge(&d, 0.0).unwrap();
        for j in 0..4 {
            assert_relative_eq!(ridge.coefficients[j], ols.coefficients[j], epsilon = 1e-8);
        }
        assert_relative_eq!(ridge.intercept, ols.intercept, epsilon = 1e-8);
    }

    #[test]
    fn ridge_matches_closed_form_oracle() {
        let d = seeded_problem(8, 30, 4, &[1.0, -1.0, 2.0, 0.0], 0.6);
        let lambda = 0.5;
        let fit = fit_ridge(&d, lambda).unwrap();

        let n = d.n() as f64;
        let c = center(&d);
        let mut m = c.x.transpose() * &c.x / n;
        for j in 0..4 {
            m[(j, j)] += 2.0 * lambda;
        }
        let inv = m.try_inverse().unwrap();
        let oracle = inv * (c.x.transpose() * &c.y / n);
        for j in 0..4 {
            assert_relative_eq!(fit.coefficients[j], oracle[j], epsilon = 1e-8);
        }
    }

    #[test]
    fn weighted_lasso_all_zero_at_lambda_max() {
        let d = seeded_problem(9, 50, 5, &[2.0, -1.0, 0.0, 3.0, 0.5], 0.4);
        let w = PenaltyWeights::unit(5);
        let lam = lambda_max(&d, &w).unwrap();
        let cfg = SolverConfig::default();
        for mult in [1.0, 1.5, 10.0] {
            let fit = fit_weighted_lasso(&d, lam * mult, &w, &cfg).unwrap();
            assert_eq!(fit.zero_count(), 5, "mult {mult}: {:?}", fit.coefficients);
        }
        let below = fit_weighted_lasso(&d, lam * 0.9, &w, &cfg).unwrap();
        assert!(below.zero_count() < 5);
    }

    #[test]
    fn weighted_lasso_orthonormal_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let n = 40;
        let p = 5;
        let raw = DMatrix::from_fn(n, p, |_, _| rng.random::<f64>() * 2.0 - 1.0);
        // center, then orthonormalize; the Q columns stay mean-zero
        let mut centered = raw.clone();
        for j in 0..p {
            let mean = raw.column(j).sum() / n as f64;
            for i in 0..n {
                centered[(i, j)] -= mean;
            }
        }
        let qr = centered.qr();
        let x = qr.q() * (n as f64).sqrt();
        let mut y: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
        let ym = y.iter().sum::<f64>() / n as f64;
        for v in y.iter_mut() {
            *v -= ym;
        }
        let d = dataset(y, x.clone());

        let lambda = 0.07;
        let fit = fit_lasso(&d, lambda, &SolverConfig::default()).unwrap();
        for j in 0..p {
            let z = x.column(j).dot(d.y()) / n as f64;
            assert_relative_eq!(
                fit.coefficients[j],
                soft_threshold(z, lambda),
                epsilon = 1e-8
            );
        }
    }

    #[test]
    fn weighted_lasso_zero_weight_coordinate_is_unpenalized() {
        let d = seeded_problem(11, 50, 3, &[1.0, -2.0, 0.5], 0.3);
        let w = PenaltyWeights {
            weights: vec![0.0, 1.0, 1.0],
            gamma: 0.0,
            source: WeightSource::Unit,
        };
        let fit = fit_weighted_lasso(&d, 0.2, &w, &SolverConfig::default()).unwrap();
        let pred = crate::core::predict(&fit, d.x()).unwrap();
        let resid = d.y() - pred;
        let score = d.x().column(0).dot(&resid) / d.n() as f64;
        assert!(score.abs() < 1e-8, "score {score}");
        assert!(fit.coefficients[0] != 0.0);
    }

    #[test]
    fn lasso_is_bit_identical_to_unit_weighted() {
        let d = seeded_problem(12, 35, 4, &[1.5, 0.0, -0.5, 2.0], 0.5);
        let cfg = SolverConfig::default();
        let a = fit_lasso(&d, 0.1, &cfg).unwrap();
        let b = fit_weighted_lasso(&d, 0.1, &PenaltyWeights::unit(4), &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn lasso_at_zero_matches_ols() {
        let d = {
            let raw = seeded_problem(13, 60, 4, &[2.0, -1.0, 0.0, 1.0], 0.4);
            let (s, _) = crate::core::standardize(&raw).unwrap();
            s
        };
        let ols = fit_ols(&d).unwrap();
        let lasso = fit_lasso(&d, 0.0, &SolverConfig::default()).unwrap();
        for j in 0..4 {
            assert_relative_eq!(lasso.coefficients[j], ols.coefficients[j], epsilon = 1e-6);
        }
    }

    #[test]
    fn lasso_sparsity_grows_with_lambda() {
        let cfg = SolverConfig::default();
        for seed in 0..10 {
            let d = seeded_problem(100 + seed, 40, 6, &[2.0, -1.5, 1.0, 0.0, 0.0, 0.0], 1.0);
            let w = PenaltyWeights::unit(6);
            let lam = lambda_max(&d, &w).unwrap();
            let strong = fit_lasso(&d, lam / 2.0, &cfg).unwrap();
            let weak = fit_lasso(&d, lam / 100.0, &cfg).unwrap();
            assert!(
                strong.zero_count() >= weak.zero_count(),
                "seed {seed}: {} < {}",
                strong.zero_count(),
                weak.zero_count()
            );
        }
    }

    #[test]
    fn adaptive_weights_follow_initial_magnitudes() {
        // noiseless OLS stage recovers (2, 0.01) so weights are (0.5, 100)
        let d = seeded_problem(14, 80, 2, &[2.0, 0.01], 0.0);
        let fit = fit_adaptive_lasso(&d, 1e-6, &SolverConfig::default()).unwrap();
        let w = fit.weights_used.as_ref().unwrap();
        assert_relative_eq!(w[0], 0.5, epsilon = 1e-6);
        assert_relative_eq!(w[1], 100.0, max_relative = 1e-4);
        assert_relative_eq!(w[1] / w[0], 200.0, max_relative = 1e-4);
    }

    #[test]
    fn adaptive_stage_excludes_tiny_initial_coefficients() {
        let init = FitResult {
            intercept: 0.0,
            coefficients: vec![1.0, 5e-11, 0.0, -0.2],
            model_kind: ModelKind::Ols,
            lambda: 0.0,
            weights_used: None,
            iterations: 0,
            converged: true,
        };
        let stage = adaptive_stage(&init, 4, 1.0).unwrap().unwrap();
        assert_eq!(stage.kept, vec![0, 3]);
        assert_eq!(stage.full_weights[1], f64::INFINITY);
        assert_eq!(stage.full_weights[2], f64::INFINITY);
        assert_relative_eq!(stage.full_weights[0], 1.0);
        assert_relative_eq!(stage.full_weights[3], 5.0);

        let all_zero = FitResult {
            coefficients: vec![0.0, 1e-12],
            ..init
        };
        assert!(adaptive_stage(&all_zero, 2, 1.0).unwrap().is_none());
    }

    #[test]
    fn adaptive_all_zero_initial_flags_not_errors() {
        // target orthogonalized against every column: the OLS first stage
        // produces coefficients at round-off level, all below the 1e-10
        // exclusion threshold
        let base = seeded_problem(15, 50, 3, &[1.0, 2.0, 3.0], 1.5);
        let ols = fit_ols(&base).unwrap();
        let pred = crate::core::predict(&ols, base.x()).unwrap();
        let resid: Vec<f64> = base.y().iter().zip(pred.iter()).map(|(y, f)| y - f).collect();
        let d = dataset(resid, base.x().clone());
        let fit = fit_adaptive_lasso(&d, 0.5, &SolverConfig::default()).unwrap();
        assert!(fit.coefficients.iter().all(|b| *b == 0.0));
        assert!(fit
            .weights_used
            .as_ref()
            .unwrap()
            .iter()
            .all(|w| w.is_infinite()));
        assert!(fit.converged);
    }

    #[test]
    fn adaptive_recovers_support_on_clean_signal() {
        let d = {
            let raw = seeded_problem(16, 200, 5, &[3.0, -2.0, 0.0, 0.0, 0.0], 0.0);
            let (s, _) = crate::core::standardize(&raw).unwrap();
            s
        };
        let (fit, _) = fit_adaptive_lasso_auto(&d, &SolverConfig::default()).unwrap();
        assert_eq!(fit.support(), vec![0, 1]);
    }

    #[test]
    fn vw_lasso_requires_volatility_source_and_reduces_to_lasso() {
        let d = {
            let raw = seeded_problem(17, 50, 3, &[1.0, -1.0, 0.0], 0.3);
            let (s, _) = crate::core::standardize(&raw).unwrap();
            s
        };
        let cfg = SolverConfig::default();

        let unit_w = PenaltyWeights::unit(3);
        assert!(matches!(
            fit_vw_lasso(&d, 0.1, &unit_w, &cfg),
            Err(Error::InvalidWeights(_))
        ));

        // equal volatilities normalize to exactly unit weights
        let w = crate::garch::weights_from_volatilities(&[1.7, 1.7, 1.7], 1.0).unwrap();
        let vw = fit_vw_lasso(&d, 0.1, &w, &cfg).unwrap();
        let plain = fit_lasso(&d, 0.1, &cfg).unwrap();
        for j in 0..3 {
            assert_relative_eq!(vw.coefficients[j], plain.coefficients[j], epsilon = 1e-8);
        }

        // γ = 0 collapses any volatilities to unit weights
        let w0 = crate::garch::weights_from_volatilities(&[0.2, 5.0, 1.0], 0.0).unwrap();
        let vw0 = fit_vw_lasso(&d, 0.1, &w0, &cfg).unwrap();
        for j in 0..3 {
            assert_relative_eq!(vw0.coefficients[j], plain.coefficients[j], epsilon = 1e-8);
        }
    }

    #[test]
    fn coefficients_permute_with_columns() {
        let d = seeded_problem(18, 45, 4, &[2.0, -1.0, 0.5, 0.0], 0.4);
        let perm = [2usize, 0, 3, 1];
        let d_perm = d.select_columns(&perm).unwrap();
        let cfg = SolverConfig::default();
        let fit = fit_lasso(&d, 0.05, &cfg).unwrap();
        let fit_perm = fit_lasso(&d_perm, 0.05, &cfg).unwrap();
        // sweep order differs, so agreement is at certificate precision
        for (slot, &j) in perm.iter().enumerate() {
            assert_relative_eq!(
                fit_perm.coefficients[slot],
                fit.coefficients[j],
                epsilon = 1e-6
            );
        }
    }

    #[test]
    fn larger_lambda_solution_wins_at_its_own_penalty() {
        let d = {
            let raw = seeded_problem(19, 60, 5, &[1.0, -2.0, 0.0, 0.5, 0.0], 0.7);
            let (s, _) = crate::core::standardize(&raw).unwrap();
            s
        };
        let cfg = SolverConfig::default();
        let w = PenaltyWeights::unit(5);
        let lam_hi = 0.3;
        let lam_lo = 0.05;
        let hi = fit_weighted_lasso(&d, lam_hi, &w, &cfg).unwrap();
        let lo = fit_weighted_lasso(&d, lam_lo, &w, &cfg).unwrap();
        let obj_hi = weighted_lasso_objective(&d, &hi, lam_hi, &w);
        let obj_lo_at_hi = weighted_lasso_objective(&d, &lo, lam_hi, &w);
        assert!(obj_hi <= obj_lo_at_hi + 1e-9);
    }

    #[test]
    fn kkt_certificate_holds_after_convergence() {
        let d = {
            let raw = seeded_problem(20, 70, 6, &[3.0, 0.0, -1.0, 0.0, 0.5, 0.0], 0.5);
            let (s, _) = crate::core::standardize(&raw).unwrap();
            s
        };
        let cfg = SolverConfig::default();
        let w = PenaltyWeights::unit(6);
        for lam in [0.02, 0.1, 0.4] {
            let fit = fit_weighted_lasso(&d, lam, &w, &cfg).unwrap();
            assert!(kkt_violation(&d, &fit, lam, &w) <= 1e-6);
        }
    }

    #[test]
    fn select_lambda_grid_shape_and_head() {
        let d = {
            let raw = seeded_problem(21, 50, 4, &[2.0, -1.0, 0.0, 0.0], 0.5);
            let (s, _) = crate::core::standardize(&raw).unwrap();
            s
        };
        let cfg = SolverConfig::default();
        let w = PenaltyWeights::unit(4);
        let path = select_lambda(&d, &w, &cfg).unwrap();
        assert_eq!(path.lambdas.len(), cfg.lambda_grid_size);
        assert_eq!(path.scores.len(), cfg.lambda_grid_size);
        assert!(path.chosen_index < path.lambdas.len());
        for pair in path.lambdas.windows(2) {
            assert!(pair[1] < pair[0]);
        }
        assert_relative_eq!(
            path.lambdas[path.lambdas.len() - 1],
            path.lambdas[0] * cfg.lambda_min_ratio,
            max_relative = 1e-12
        );
        let head = fit_weighted_lasso(&d, path.lambdas[0], &w, &cfg).unwrap();
        assert_eq!(head.zero_count(), 4);
    }

    #[test]
    fn select_lambda_noise_prefers_heavy_penalty() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let x = DMatrix::from_fn(80, 5, |_, _| rng.random::<f64>() * 2.0 - 1.0);
        let y: Vec<f64> = (0..80).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        let d = {
            let raw = dataset(y, x);
            let (s, _) = crate::core::standardize(&raw).unwrap();
            s
        };
        let cfg = SolverConfig::default();
        let path = select_lambda(&d, &PenaltyWeights::unit(5), &cfg).unwrap();
        assert!(
            path.chosen_index <= cfg.lambda_grid_size / 4,
            "chose index {} of {}",
            path.chosen_index,
            cfg.lambda_grid_size
        );
    }

    #[test]
    fn select_lambda_bic_finds_true_support_on_clean_data() {
        let d = {
            let raw = seeded_problem(23, 200, 5, &[3.0, -2.0, 0.0, 0.0, 0.0], 0.0);
            let (s, _) = crate::core::standardize(&raw).unwrap();
            s
        };
        let cfg = SolverConfig::default();
        let w = PenaltyWeights::unit(5);
        let path = select_lambda(&d, &w, &cfg).unwrap();
        let fit = fit_weighted_lasso(&d, path.chosen_lambda(), &w, &cfg).unwrap();
        assert_eq!(fit.support(), vec![0, 1]);
    }

    #[test]
    fn select_lambda_rolling_cv_runs_and_prefers_signal() {
        let d = {
            let raw = seeded_problem(24, 90, 4, &[2.0, -1.5, 0.0, 0.0], 0.5);
            let (s, _) = crate::core::standardize(&raw).unwrap();
            s
        };
        let mut cfg = SolverConfig::default();
        cfg.selection = Selection::RollingCv;
        let w = PenaltyWeights::unit(4);
        let path = select_lambda(&d, &w, &cfg).unwrap();
        // a signal problem should not select the all-zero head of the grid
        assert!(path.chosen_index > 0);
        let fit = fit_weighted_lasso(&d, path.chosen_lambda(), &w, &cfg).unwrap();
        assert!(fit.coefficients[0] != 0.0 && fit.coefficients[1] != 0.0);
    }

    #[test]
    fn rolling_folds_train_strictly_before_test() {
        let bounds = rolling_fold_bounds(12, 5).unwrap();
        assert_eq!(bounds, vec![(2, 4), (4, 6), (6, 8), (8, 10), (10, 12)]);
        assert!(rolling_fold_bounds(11, 5).is_err());

        let bounds = rolling_fold_bounds(100, 4).unwrap();
        assert_eq!(bounds.len(), 4);
        assert_eq!(bounds[0].0, 20);
        assert_eq!(bounds[3].1, 100);
    }

    #[test]
    fn ridge_selection_uses_same_grid_scale() {
        let d = {
            let raw = seeded_problem(25, 80, 4, &[1.0, -1.0, 0.5, 0.0], 0.6);
            let (s, _) = crate::core::standardize(&raw).unwrap();
            s
        };
        let cfg = SolverConfig::default();
        let path = select_ridge_lambda(&d, &cfg).unwrap();
        let lasso_head = lambda_max(&d, &PenaltyWeights::unit(4)).unwrap();
        assert_relative_eq!(path.lambdas[0], lasso_head, epsilon = 1e-12);
        assert!(path.chosen_index < path.lambdas.len());
    }

    #[test]
    fn argmin_breaks_ties_toward_larger_lambda() {
        assert_eq!(argmin_prefer_first(&[1.0, 1.0, 2.0]), 0);
        assert_eq!(argmin_prefer_first(&[3.0, 1.0, 1.0]), 1);
        assert_eq!(argmin_prefer_first(&[f64::NAN, 2.0, 1.0]), 2);
        assert_eq!(argmin_prefer_first(&[2.0]), 0);
    }

    #[test]
    fn lambda_max_rejects_zero_weights() {
        let d = seeded_problem(26, 30, 2, &[1.0, 1.0], 0.1);
        let w = PenaltyWeights {
            weights: vec![0.0, 1.0],
            gamma: 0.0,
            source: WeightSource::Unit,
        };
        assert!(matches!(
            lambda_max(&d, &w),
            Err(Error::InvalidWeights(_))
        ));
    }

    #[test]
    fn not_converged_carries_last_iterate() {
        let d = {
            let raw = seeded_problem(27, 60, 5, &[2.0, -1.0, 0.5, 0.0, 1.0], 0.3);
            let (s, _) = crate::core::standardize(&raw).unwrap();
            s
        };
        let mut cfg = SolverConfig::default();
        cfg.max_iterations = 1;
        let res = fit_lasso(&d, 1e-6, &cfg);
        match res {
            Err(Error::NotConverged(fit)) => {
                assert!(!fit.converged);
                assert_eq!(fit.iterations, 1);
                assert!(fit.coefficients.iter().any(|b| *b != 0.0));
            }
            other => panic!("expected NotConverged, got {other:?}"),
        }
        let accepted = crate::error::accept_last_iterate(fit_lasso(&d, 1e-6, &cfg)).unwrap();
        assert!(!accepted.converged);
    }
}

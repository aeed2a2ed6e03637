//! GARCH(1,1) estimation and volatility-derived penalty weights.
//!
//! The conditional variance recursion is
//!
//! σ²_t = ω + α·ε²_{t-1} + β·σ²_{t-1},   σ²_1 = init_var,
//!
//! with ω > 0, α ≥ 0, β ≥ 0 and α + β < 1. Each predictor column is fit
//! separately; the mean fitted conditional standard deviation v̄_j maps to a
//! penalty weight w_j ∝ (1/v̄_j)^γ, so calmer series are penalized harder.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::core::Dataset;
use crate::error::{Error, Result};

/// Stationarity margin: fitted α + β never exceeds 1 minus this.
const STATIONARITY_GAP: f64 = 1e-6;

/// Minimum series length accepted by [`garch_fit`].
pub const MIN_GARCH_LEN: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GarchParams {
    pub omega: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl GarchParams {
    pub fn new(omega: f64, alpha: f64, beta: f64) -> Result<Self> {
        let p = Self { omega, alpha, beta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega.is_finite() && self.alpha.is_finite() && self.beta.is_finite()) {
            return Err(Error::InvalidInput("non-finite GARCH parameters".into()));
        }
        if self.omega <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "omega must be positive, got {}",
                self.omega
            )));
        }
        if self.alpha < 0.0 || self.beta < 0.0 {
            return Err(Error::InvalidInput(format!(
                "alpha and beta must be nonnegative, got ({}, {})",
                self.alpha, self.beta
            )));
        }
        if self.alpha + self.beta >= 1.0 {
            return Err(Error::InvalidInput(format!(
                "alpha + beta must be below 1 for stationarity, got {}",
                self.alpha + self.beta
            )));
        }
        Ok(())
    }

    /// Unconditional variance ω / (1 − α − β).
    pub fn unconditional_variance(&self) -> f64 {
        self.omega / (1.0 - self.alpha - self.beta)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GarchFit {
    pub params: GarchParams,
    pub cond_var: Vec<f64>,
    pub loglik: f64,
    pub converged: bool,
}

impl GarchFit {
    /// Largest absolute recursion residual over t ≥ 2, for self-checks.
    /// `series` must be the residual series the fit saw (demeaned when the
    /// fit options demeaned).
    pub fn recursion_residual(&self, series: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for t in 1..self.cond_var.len() {
            let expect = self.params.omega
                + self.params.alpha * series[t - 1] * series[t - 1]
                + self.params.beta * self.cond_var[t - 1];
            worst = worst.max((self.cond_var[t] - expect).abs());
        }
        worst
    }
}

/// Where a set of penalty weights came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightSource {
    Volatility,
    Adaptive,
    Unit,
}

/// Per-variable penalty multipliers for the weighted ℓ1 problem.
///
/// Volatility weights are normalized to mean 1; adaptive weights are kept on
/// their natural 1/|β̂_j|^γ scale. All entries must be finite and nonnegative
/// with at least one strictly positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenaltyWeights {
    pub weights: Vec<f64>,
    pub gamma: f64,
    pub source: WeightSource,
}

impl PenaltyWeights {
    pub fn unit(p: usize) -> Self {
        Self {
            weights: vec![1.0; p],
            gamma: 0.0,
            source: WeightSource::Unit,
        }
    }

    pub fn adaptive(weights: Vec<f64>, gamma: f64) -> Result<Self> {
        let w = Self {
            weights,
            gamma,
            source: WeightSource::Adaptive,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn p(&self) -> usize {
        self.weights.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.weights.is_empty() {
            return Err(Error::InvalidWeights("empty weight vector".into()));
        }
        if self.weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidWeights(
                "weights must be finite and nonnegative".into(),
            ));
        }
        if self.weights.iter().all(|w| *w == 0.0) {
            return Err(Error::InvalidWeights(
                "at least one weight must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Options for [`garch_fit`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GarchOptions {
    /// Seed for the jitter applied to restart points (restart 0 is never jittered).
    pub seed: u64,
    /// Number of simplex restarts.
    pub restarts: usize,
    /// Iteration cap per simplex run.
    pub max_iterations: usize,
    /// Simplex stops when the objective spread across vertices falls below this.
    pub tolerance: f64,
    /// Subtract the sample mean before fitting.
    pub demean: bool,
}

impl Default for GarchOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            restarts: 5,
            max_iterations: 2000,
            tolerance: 1e-8,
            demean: true,
        }
    }
}

/// Gaussian log-likelihood of `series` under the variance recursion, together
/// with the σ²_t sequence.
pub fn garch_loglik(series: &[f64], params: &GarchParams, init_var: f64) -> Result<(f64, Vec<f64>)> {
    params.validate()?;
    if series.len() < 2 {
        return Err(Error::SeriesTooShort {
            len: series.len(),
            min: 2,
        });
    }
    if !(init_var.is_finite() && init_var > 0.0) {
        return Err(Error::InvalidInput(format!(
            "init_var must be positive and finite, got {init_var}"
        )));
    }
    let n = series.len();
    let mut cond_var = Vec::with_capacity(n);
    let mut loglik = 0.0;
    let ln_2pi = (2.0 * std::f64::consts::PI).ln();
    let mut var = init_var;
    for t in 0..n {
        if t > 0 {
            var = params.omega + params.alpha * series[t - 1] * series[t - 1] + params.beta * var;
        }
        if !(var.is_finite() && var > 0.0) {
            return Err(Error::NonPositiveVariance { t: t + 1 });
        }
        cond_var.push(var);
        loglik += -0.5 * (ln_2pi + var.ln() + series[t] * series[t] / var);
    }
    Ok((loglik, cond_var))
}

/// Draws ε_t = σ_t·z_t from the recursion started at the unconditional
/// variance, with z_t standard normal from a seeded generator.
pub fn simulate_garch(params: &GarchParams, n: usize, seed: u64) -> Result<Vec<f64>> {
    params.validate()?;
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    let mut var = params.unconditional_variance();
    for _ in 0..n {
        let z: f64 = rng.sample(StandardNormal);
        let eps = var.sqrt() * z;
        out.push(eps);
        var = params.omega + params.alpha * eps * eps + params.beta * var;
    }
    Ok(out)
}

// Optimizer parameterization: theta = (log ω, logit(persistence), logit(mixing))
// with α = s·m, β = s·(1−m), s = sigmoid(θ1)·(1−gap). Keeps every simplex
// vertex inside the constraint region without penalty terms.

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn logit(p: f64) -> f64 {
    let p = p.clamp(1e-12, 1.0 - 1e-12);
    (p / (1.0 - p)).ln()
}

fn theta_to_params(theta: &[f64; 3]) -> GarchParams {
    let omega = theta[0].clamp(-690.0, 690.0).exp();
    let s = sigmoid(theta[1]) * (1.0 - STATIONARITY_GAP);
    let m = sigmoid(theta[2]);
    GarchParams {
        omega,
        alpha: s * m,
        beta: s * (1.0 - m),
    }
}

fn params_to_theta(p: &GarchParams) -> [f64; 3] {
    let s = (p.alpha + p.beta).clamp(1e-8, 1.0 - STATIONARITY_GAP);
    let m = if s > 0.0 { p.alpha / s } else { 0.5 };
    [
        p.omega.max(1e-300).ln(),
        logit(s / (1.0 - STATIONARITY_GAP)),
        logit(m),
    ]
}

/// Plain Nelder–Mead on 3 parameters. Returns (argmin, min, converged) where
/// converged means the vertex objective spread fell below `tol`.
fn nelder_mead<F: Fn(&[f64; 3]) -> f64>(
    f: F,
    start: [f64; 3],
    max_iter: usize,
    tol: f64,
) -> ([f64; 3], f64, bool) {
    const REFLECT: f64 = 1.0;
    const EXPAND: f64 = 2.0;
    const CONTRACT: f64 = 0.5;
    const SHRINK: f64 = 0.5;
    const STEP: f64 = 0.5;

    let mut simplex: Vec<([f64; 3], f64)> = Vec::with_capacity(4);
    simplex.push((start, f(&start)));
    for i in 0..3 {
        let mut v = start;
        v[i] += STEP;
        simplex.push((v, f(&v)));
    }

    let mut converged = false;
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let spread = simplex[3].1 - simplex[0].1;
        if spread.abs() < tol {
            converged = true;
            break;
        }

        let mut centroid = [0.0; 3];
        for v in &simplex[..3] {
            for i in 0..3 {
                centroid[i] += v.0[i] / 3.0;
            }
        }
        let worst = simplex[3];
        let at = |coef: f64| {
            let mut v = [0.0; 3];
            for i in 0..3 {
                v[i] = centroid[i] + coef * (centroid[i] - worst.0[i]);
            }
            v
        };

        let refl = at(REFLECT);
        let f_refl = f(&refl);
        if f_refl < simplex[0].1 {
            let exp = at(EXPAND);
            let f_exp = f(&exp);
            simplex[3] = if f_exp < f_refl { (exp, f_exp) } else { (refl, f_refl) };
        } else if f_refl < simplex[2].1 {
            simplex[3] = (refl, f_refl);
        } else {
            let outside = f_refl < worst.1;
            let con = at(if outside { CONTRACT } else { -CONTRACT });
            let f_con = f(&con);
            if f_con < if outside { f_refl } else { worst.1 } {
                simplex[3] = (con, f_con);
            } else {
                let best = simplex[0].0;
                for v in simplex.iter_mut().skip(1) {
                    for i in 0..3 {
                        v.0[i] = best[i] + SHRINK * (v.0[i] - best[i]);
                    }
                    v.1 = f(&v.0);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    (simplex[0].0, simplex[0].1, converged)
}

/// Maximum-likelihood GARCH(1,1) fit by multi-start simplex search.
///
/// The first start is variance targeting (α=0.1, β=0.8, ω implied by the
/// sample variance) and is never jittered, so the fitted log-likelihood can
/// never fall below the likelihood at that point. Further starts cover low
/// and high persistence and are jittered deterministically from `opts.seed`.
pub fn garch_fit(series: &[f64], opts: &GarchOptions) -> Result<GarchFit> {
    if series.len() < MIN_GARCH_LEN {
        return Err(Error::SeriesTooShort {
            len: series.len(),
            min: MIN_GARCH_LEN,
        });
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("series contains non-finite values".into()));
    }
    let n = series.len() as f64;
    let mean = series.iter().sum::<f64>() / n;
    let centered: Vec<f64>;
    let data: &[f64] = if opts.demean {
        centered = series.iter().map(|v| v - mean).collect();
        &centered
    } else {
        series
    };
    let var = {
        let m = data.iter().sum::<f64>() / n;
        data.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1.0)
    };
    if var < 1e-12 {
        return Err(Error::DegenerateSeries);
    }

    let objective = |theta: &[f64; 3]| -> f64 {
        let params = theta_to_params(theta);
        match garch_loglik(data, &params, var) {
            Ok((ll, _)) if ll.is_finite() => -ll,
            _ => f64::INFINITY,
        }
    };

    // (alpha, beta) bases; omega is variance-targeted for each.
    let bases = [
        (0.10, 0.80),
        (0.05, 0.90),
        (0.20, 0.60),
        (0.01, 0.45),
        (0.30, 0.30),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best: Option<([f64; 3], f64, bool)> = None;
    for r in 0..opts.restarts.max(1) {
        let (a, b) = bases[r % bases.len()];
        let start_params = GarchParams {
            omega: var * (1.0 - a - b),
            alpha: a,
            beta: b,
        };
        let mut theta = params_to_theta(&start_params);
        if r > 0 {
            for t in theta.iter_mut() {
                *t += rng.random::<f64>() - 0.5;
            }
        }
        let run = nelder_mead(&objective, theta, opts.max_iterations, opts.tolerance);
        let better = match &best {
            Some((_, f_best, _)) => run.1 < *f_best,
            None => true,
        };
        if better {
            best = Some(run);
        }
    }
    let (theta, neg_ll, converged) = best.expect("at least one restart");
    if !neg_ll.is_finite() {
        return Err(Error::InvalidInput(
            "likelihood not finite at any candidate point".into(),
        ));
    }
    let params = theta_to_params(&theta);
    params.validate()?;
    let (loglik, cond_var) = garch_loglik(data, &params, var)?;
    Ok(GarchFit {
        params,
        cond_var,
        loglik,
        converged,
    })
}

/// How a column is turned into a shock series before GARCH fitting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VolTransform {
    Levels,
    Diff,
    LogDiff,
}

impl VolTransform {
    pub fn label(&self) -> &'static str {
        match self {
            VolTransform::Levels => "levels",
            VolTransform::Diff => "diff",
            VolTransform::LogDiff => "log_diff",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "levels" => Some(VolTransform::Levels),
            "diff" => Some(VolTransform::Diff),
            "log_diff" => Some(VolTransform::LogDiff),
            _ => None,
        }
    }

    fn apply(&self, name: &str, series: &[f64]) -> Result<Vec<f64>> {
        let out = match self {
            VolTransform::Levels => series.to_vec(),
            VolTransform::Diff => series.windows(2).map(|w| w[1] - w[0]).collect(),
            VolTransform::LogDiff => {
                if let Some(bad) = series.iter().find(|v| **v <= 0.0) {
                    return Err(Error::InvalidTransform {
                        column: name.to_string(),
                        reason: format!("log_diff requires positive values, found {bad}"),
                    });
                }
                series.windows(2).map(|w| w[1].ln() - w[0].ln()).collect()
            }
        };
        if out.is_empty() {
            return Err(Error::EmptyAfterTransform);
        }
        Ok(out)
    }
}

impl std::fmt::Display for VolTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Builds normalized weights from already-known mean volatilities:
/// w_j ∝ (1/v_j)^γ, rescaled so the weights average exactly 1.
pub fn weights_from_volatilities(vols: &[f64], gamma: f64) -> Result<PenaltyWeights> {
    if vols.is_empty() {
        return Err(Error::InvalidWeights("no volatilities given".into()));
    }
    if !gamma.is_finite() {
        return Err(Error::InvalidWeights(format!("gamma must be finite, got {gamma}")));
    }
    if vols.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::InvalidWeights(
            "volatilities must be positive and finite".into(),
        ));
    }
    let raw: Vec<f64> = vols.iter().map(|v| (1.0 / v).powf(gamma)).collect();
    let sum: f64 = raw.iter().sum();
    if !(sum.is_finite() && sum > 0.0) {
        return Err(Error::InvalidWeights(
            "weight normalization overflowed; try a smaller |gamma|".into(),
        ));
    }
    let p = raw.len() as f64;
    let weights = raw.iter().map(|w| w * p / sum).collect();
    let out = PenaltyWeights {
        weights,
        gamma,
        source: WeightSource::Volatility,
    };
    out.validate()?;
    Ok(out)
}

/// Fits every predictor column (after `transform`, demeaned) without failing
/// fast: each entry pairs the column name with its fit and mean conditional
/// volatility, or with the tagged per-column error.
///
/// Column fits run in parallel; results are kept in column order, so the
/// outcome does not depend on scheduling.
pub fn column_garch_fits(
    d: &Dataset,
    transform: VolTransform,
    opts: &GarchOptions,
) -> Vec<(String, Result<(GarchFit, f64)>)> {
    let mut fit_opts = *opts;
    fit_opts.demean = true;
    (0..d.p())
        .into_par_iter()
        .map(|j| {
            let name = d.column_names()[j].clone();
            let out = (|| {
                let series = transform.apply(&name, &d.column(j))?;
                let fit = garch_fit(&series, &fit_opts).map_err(|e| Error::GarchColumn {
                    column: name.clone(),
                    source: Box::new(e),
                })?;
                let v = fit.cond_var.iter().map(|s2| s2.sqrt()).sum::<f64>()
                    / fit.cond_var.len() as f64;
                Ok((fit, v))
            })();
            (name, out)
        })
        .collect()
}

/// Fits GARCH(1,1) to every predictor column (after `transform`, demeaned)
/// and converts mean conditional volatilities into normalized penalty weights.
/// Fails on the first column error, in column order.
pub fn volatility_weights(
    d: &Dataset,
    gamma: f64,
    transform: VolTransform,
    opts: &GarchOptions,
) -> Result<PenaltyWeights> {
    weights_from_volatilities(&column_volatilities(d, transform, opts)?, gamma)
}

/// Mean conditional volatility per column, for reporting alongside weights.
pub fn column_volatilities(
    d: &Dataset,
    transform: VolTransform,
    opts: &GarchOptions,
) -> Result<Vec<f64>> {
    let mut vols = Vec::with_capacity(d.p());
    for (_, r) in column_garch_fits(d, transform, opts) {
        vols.push(r?.1);
    }
    Ok(vols)
}

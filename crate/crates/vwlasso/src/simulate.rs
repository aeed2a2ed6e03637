//! Synthetic data generator with sinusoidal error volatility, plus a Monte
//! Carlo harness comparing lasso, adaptive lasso, and the volatility-weighted
//! lasso on coefficient recovery.
//!
//! The data-generating process:
//!
//! x_{j,t} = φ_j·x_{j,t-1} + u_{j,t},   u i.i.d. N(0,1), x_{j,0} stationary
//! σ_t = vol_low + (vol_high − vol_low)·(1 + sin(2π·cycles·t/n))/2
//! ε_t = ρ·ε_{t-1} + σ_t·z_t,           z i.i.d. N(0,1), ε_{-1} = 0
//! y_t = x_tᵀβ + ε_t
//!
//! The `signal_on_high_vol` scenario replaces the first two predictors with
//! high-variance GARCH(1,1) innovation series (jumpy, serially uncorrelated)
//! and the rest with smooth low-variance AR(1) noise (φ = 0.95), putting the
//! true signal exactly where volatility weighting helps.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::core::{destandardize_fit, standardize, Dataset, ModelKind, TimeIndex};
use crate::error::{Error, Result};
use crate::garch::{volatility_weights, GarchOptions, VolTransform};
use crate::penalized::{
    fit_adaptive_lasso_auto, fit_lasso_auto, fit_vw_lasso_auto, Selection, SolverConfig,
};

/// GARCH parameters of the jumpy signal predictors in `signal_on_high_vol`:
/// unconditional variance 4 with low persistence of shocks into the level.
const SIGNAL_GARCH: (f64, f64, f64) = (0.4, 0.1, 0.8);
/// AR coefficient and innovation sd of the smooth noise predictors.
const NOISE_AR: f64 = 0.95;
const NOISE_SD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Paper,
    SignalOnHighVol,
}

impl Scenario {
    pub fn label(&self) -> &'static str {
        match self {
            Scenario::Paper => "paper",
            Scenario::SignalOnHighVol => "signal_on_high_vol",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "paper" => Some(Scenario::Paper),
            "signal_on_high_vol" => Some(Scenario::SignalOnHighVol),
            _ => None,
        }
    }
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    pub n: usize,
    pub p: usize,
    pub ar_coeffs_x: Vec<f64>,
    pub true_beta: Vec<f64>,
    pub error_ar: f64,
    pub vol_low: f64,
    pub vol_high: f64,
    pub vol_cycles: f64,
    pub seed: u64,
    pub scenario: Scenario,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n: 100,
            p: 5,
            ar_coeffs_x: vec![0.5; 5],
            true_beta: vec![3.0, -2.0, 0.0, 0.0, 0.0],
            error_ar: 0.5,
            vol_low: 1.0,
            vol_high: 2.0 * std::f64::consts::PI,
            vol_cycles: 1.0,
            seed: 0,
            scenario: Scenario::Paper,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 10 {
            return Err(Error::InvalidInput(format!("n must be at least 10, got {}", self.n)));
        }
        if self.p == 0 {
            return Err(Error::InvalidInput("p must be at least 1".into()));
        }
        if self.ar_coeffs_x.len() != self.p {
            return Err(Error::LengthMismatch {
                expected: self.p,
                got: self.ar_coeffs_x.len(),
            });
        }
        if self.true_beta.len() != self.p {
            return Err(Error::LengthMismatch {
                expected: self.p,
                got: self.true_beta.len(),
            });
        }
        if self.ar_coeffs_x.iter().any(|a| a.abs() >= 1.0 || !a.is_finite()) {
            return Err(Error::InvalidInput(
                "predictor AR coefficients must lie strictly inside (-1,1)".into(),
            ));
        }
        if self.error_ar.abs() >= 1.0 || !self.error_ar.is_finite() {
            return Err(Error::InvalidInput(format!(
                "error_ar must lie strictly inside (-1,1), got {}",
                self.error_ar
            )));
        }
        // equal bounds give constant volatility, which several diagnostics rely on
        if !(self.vol_low > 0.0 && self.vol_high >= self.vol_low) {
            return Err(Error::InvalidInput(format!(
                "need vol_high >= vol_low > 0, got [{}, {}]",
                self.vol_low, self.vol_high
            )));
        }
        if !(self.vol_cycles > 0.0 && self.vol_cycles.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "vol_cycles must be positive, got {}",
                self.vol_cycles
            )));
        }
        if self.true_beta.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidInput("true_beta must be finite".into()));
        }
        Ok(())
    }
}

/// One simulated draw: the dataset plus the ground truth behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct SimInstance {
    pub dataset: Dataset,
    pub true_beta: Vec<f64>,
    pub sigma_path: Vec<f64>,
}

/// Deterministic sub-seed for replication `rep` of a master seed
/// (splitmix64 of the golden-ratio-spaced stream).
pub fn child_seed(master: u64, rep: usize) -> u64 {
    let mut z = master.wrapping_add((rep as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn sigma_at(cfg: &SimConfig, t: usize) -> f64 {
    let phase = 2.0 * std::f64::consts::PI * cfg.vol_cycles * t as f64 / cfg.n as f64;
    cfg.vol_low + (cfg.vol_high - cfg.vol_low) * (1.0 + phase.sin()) / 2.0
}

/// Draws one instance. Column draws come first (column by column), then the
/// error innovations, so the random stream layout is fixed for a given (n, p)
/// regardless of scenario.
pub fn simulate_dgp(cfg: &SimConfig) -> Result<SimInstance> {
    cfg.validate()?;
    let (n, p) = (cfg.n, cfg.p);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut x = DMatrix::zeros(n, p);

    for j in 0..p {
        match cfg.scenario {
            Scenario::Paper => {
                let phi = cfg.ar_coeffs_x[j];
                let stationary_sd = 1.0 / (1.0 - phi * phi).sqrt();
                let mut prev = 0.0;
                for t in 0..n {
                    let z: f64 = rng.sample(StandardNormal);
                    let v = if t == 0 {
                        stationary_sd * z
                    } else {
                        phi * prev + z
                    };
                    x[(t, j)] = v;
                    prev = v;
                }
            }
            Scenario::SignalOnHighVol => {
                if j < 2.min(p) {
                    // jumpy GARCH(1,1) innovations with unconditional variance 4
                    let (omega, alpha, beta) = SIGNAL_GARCH;
                    let mut var = omega / (1.0 - alpha - beta);
                    for t in 0..n {
                        let z: f64 = rng.sample(StandardNormal);
                        let eps = var.sqrt() * z;
                        x[(t, j)] = eps;
                        var = omega + alpha * eps * eps + beta * var;
                    }
                } else {
                    // smooth persistent AR(1) with small innovations
                    let stationary_sd = NOISE_SD / (1.0 - NOISE_AR * NOISE_AR).sqrt();
                    let mut prev = 0.0;
                    for t in 0..n {
                        let z: f64 = rng.sample(StandardNormal);
                        let v = if t == 0 {
                            stationary_sd * z
                        } else {
                            NOISE_AR * prev + NOISE_SD * z
                        };
                        x[(t, j)] = v;
                        prev = v;
                    }
                }
            }
        }
    }

    let mut sigma_path = Vec::with_capacity(n);
    let mut y = DVector::zeros(n);
    let mut eps_prev = 0.0;
    for t in 0..n {
        let sigma = sigma_at(cfg, t);
        sigma_path.push(sigma);
        let z: f64 = rng.sample(StandardNormal);
        let eps = cfg.error_ar * eps_prev + sigma * z;
        eps_prev = eps;
        let mut v = eps;
        for j in 0..p {
            v += cfg.true_beta[j] * x[(t, j)];
        }
        y[t] = v;
    }

    let names = (1..=p).map(|j| format!("x{j}")).collect();
    let dataset = Dataset::new(TimeIndex::synthetic(n), "y", y, x, names)?;
    Ok(SimInstance {
        dataset,
        true_beta: cfg.true_beta.clone(),
        sigma_path,
    })
}

/// Raw-scale coefficient rows for the three penalized methods at their
/// BIC-selected λ on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub models: Vec<ModelKind>,
    /// Row-per-model raw-scale coefficients, aligned with `models`.
    pub coefficients: Vec<Vec<f64>>,
    pub lambdas: Vec<f64>,
    pub seed: u64,
}

fn fit_three(inst: &SimInstance, solver_cfg: &SolverConfig, garch_seed: u64) -> Result<CoefficientTable> {
    let mut cfg = *solver_cfg;
    cfg.selection = Selection::Bic;
    let (std_data, info) = standardize(&inst.dataset)?;
    let garch_opts = GarchOptions {
        seed: garch_seed,
        ..GarchOptions::default()
    };
    let w = volatility_weights(&std_data, 1.0, VolTransform::Diff, &garch_opts)?;

    let (lasso, lasso_path) = fit_lasso_auto(&std_data, &cfg)?;
    let (adaptive, adaptive_path) = fit_adaptive_lasso_auto(&std_data, &cfg)?;
    let (vw, vw_path) = fit_vw_lasso_auto(&std_data, &w, &cfg)?;

    let mut coefficients = Vec::with_capacity(3);
    for fit in [&lasso, &adaptive, &vw] {
        coefficients.push(destandardize_fit(fit, &info)?.coefficients);
    }
    Ok(CoefficientTable {
        models: vec![ModelKind::Lasso, ModelKind::AdaptiveLasso, ModelKind::VwLasso],
        coefficients,
        lambdas: vec![
            lasso_path.chosen_lambda(),
            adaptive_path.chosen_lambda(),
            vw_path.chosen_lambda(),
        ],
        seed: garch_seed,
    })
}

/// One simulated instance, three penalized fits, coefficients in raw scale.
pub fn run_table1(cfg: &SimConfig, solver_cfg: &SolverConfig) -> Result<CoefficientTable> {
    solver_cfg.validate()?;
    let inst = simulate_dgp(cfg)?;
    fit_three(&inst, solver_cfg, cfg.seed)
}

/// Outcome of a single Monte Carlo replication.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicationRecord {
    pub rep: usize,
    pub seed: u64,
    /// ‖β̂ − β‖₂ per model, aligned with the report's model order.
    pub l2: Vec<f64>,
    pub precision: Vec<f64>,
    pub recall: Vec<f64>,
}

/// Aggregate coefficient-recovery comparison across replications.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicationReport {
    pub models: Vec<ModelKind>,
    pub records: Vec<ReplicationRecord>,
    pub median_l2: Vec<f64>,
    pub iqr_l2: Vec<f64>,
    pub mean_precision: Vec<f64>,
    pub mean_recall: Vec<f64>,
}

/// Linear-interpolation quantile of an unsorted sample (numpy's default).
pub fn quantile(values: &[f64], q: f64) -> f64 {
    assert!(!values.is_empty() && (0.0..=1.0).contains(&q));
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("non-NaN values"));
    let pos = q * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        v[lo]
    } else {
        v[lo] + (pos - lo as f64) * (v[hi] - v[lo])
    }
}

fn support_scores(est: &[f64], truth: &[f64]) -> (f64, f64) {
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut fn_ = 0usize;
    for (e, t) in est.iter().zip(truth.iter()) {
        match (*e != 0.0, *t != 0.0) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => {}
        }
    }
    // empty selections make no mistakes of that kind
    let precision = if tp + fp == 0 { 1.0 } else { tp as f64 / (tp + fp) as f64 };
    let recall = if tp + fn_ == 0 { 1.0 } else { tp as f64 / (tp + fn_) as f64 };
    (precision, recall)
}

/// Runs `reps` independent replications of the three-way comparison.
/// Replication r uses `child_seed(cfg.seed, r)` for both the draw and the
/// GARCH restarts, so the report is reproducible record by record.
pub fn run_monte_carlo(
    cfg: &SimConfig,
    solver_cfg: &SolverConfig,
    reps: usize,
) -> Result<ReplicationReport> {
    cfg.validate()?;
    solver_cfg.validate()?;
    if reps == 0 {
        return Err(Error::InvalidInput("reps must be at least 1".into()));
    }
    let results: Vec<Result<ReplicationRecord>> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let seed = child_seed(cfg.seed, rep);
            let mut rep_cfg = cfg.clone();
            rep_cfg.seed = seed;
            let inst = simulate_dgp(&rep_cfg)?;
            let table = fit_three(&inst, solver_cfg, seed)?;
            let mut l2 = Vec::with_capacity(3);
            let mut precision = Vec::with_capacity(3);
            let mut recall = Vec::with_capacity(3);
            for coefs in &table.coefficients {
                let err: f64 = coefs
                    .iter()
                    .zip(inst.true_beta.iter())
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                l2.push(err);
                let (pr, rc) = support_scores(coefs, &inst.true_beta);
                precision.push(pr);
                recall.push(rc);
            }
            Ok(ReplicationRecord {
                rep,
                seed,
                l2,
                precision,
                recall,
            })
        })
        .collect();

    let mut records = Vec::with_capacity(reps);
    for r in results {
        records.push(r?);
    }
    let models = vec![ModelKind::Lasso, ModelKind::AdaptiveLasso, ModelKind::VwLasso];
    let mut median_l2 = Vec::with_capacity(3);
    let mut iqr_l2 = Vec::with_capacity(3);
    let mut mean_precision = Vec::with_capacity(3);
    let mut mean_recall = Vec::with_capacity(3);
    for m in 0..3 {
        let l2s: Vec<f64> = records.iter().map(|r| r.l2[m]).collect();
        median_l2.push(quantile(&l2s, 0.5));
        iqr_l2.push(quantile(&l2s, 0.75) - quantile(&l2s, 0.25));
        mean_precision.push(records.iter().map(|r| r.precision[m]).sum::<f64>() / reps as f64);
        mean_recall.push(records.iter().map(|r| r.recall[m]).sum::<f64>() / reps as f64);
    }
    Ok(ReplicationReport {
        models,
        records,
        median_l2,
        iqr_l2,
        mean_precision,
        mean_recall,
    })
}

//! Batch command-line interface.
//!
//! Five subcommands (`simulate`, `backtest`, `garch`, `fit`, `explain`) share
//! the flags `--config <json>`, `--seed`, `--out <dir>`, and `--threads`.
//! Explicit flags override config-file fields; the fully resolved
//! configuration is echoed into each run's JSON sidecar. Exit codes: 0 for
//! success (warnings included), 1 for runtime failures, 2 for usage or
//! configuration errors. `--threads` only sizes the worker pool and is never
//! part of the echoed configuration, so outputs are byte-identical across
//! thread counts.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::core::{destandardize_fit, standardize, ModelKind};
use crate::error::Result;
use crate::evaluate::{run_backtest_with, SplitSpec, VolWeightConfig};
use crate::explain::{column_means, importance_ranking, linear_shap};
use crate::garch::{column_garch_fits, weights_from_volatilities, PenaltyWeights, VolTransform};
use crate::io::{
    self, load_csv, load_weights, GarchColumnSummary, IngestSpec, SavedFit, Sidecar,
};
use crate::penalized::{
    fit_adaptive_lasso_auto, fit_lasso_auto, fit_ols, fit_ridge, fit_vw_lasso_auto,
    select_ridge_lambda, LambdaPath, Selection, SolverConfig,
};
use crate::simulate::{run_monte_carlo, run_table1, simulate_dgp, Scenario, SimConfig};

#[derive(Parser)]
#[command(
    name = "vwlasso",
    version,
    about = "Volatility-weighted lasso toolkit: simulation studies, GARCH penalty weights, chronological backtests, and SHAP attribution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a synthetic heteroskedastic dataset and compare penalized fits
    Simulate(SimulateArgs),
    /// Five-model backtest over chronological training fractions
    Backtest(BacktestArgs),
    /// Per-column GARCH(1,1) fits and normalized penalty weights
    Garch(GarchArgs),
    /// Fit one model on a CSV and save it for later attribution
    Fit(FitArgs),
    /// SHAP attributions and importance ranking for a saved fit
    Explain(ExplainArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// JSON config file; explicit flags override its fields
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Master seed (overrides the config file)
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory, created if missing
    #[arg(long, value_name = "DIR", default_value = "out")]
    out: PathBuf,
    /// Worker thread count (default: all cores; never affects output bytes)
    #[arg(long)]
    threads: Option<usize>,
}

/// Usage/config errors exit 2, runtime errors exit 1.
enum Failure {
    Usage(String),
    Runtime(String),
}

impl Failure {
    fn usage(flag: &str, e: impl std::fmt::Display) -> Self {
        Failure::Usage(format!("{flag}: {e}"))
    }
}

type CmdResult = std::result::Result<Vec<String>, Failure>;

fn runtime(e: impl std::fmt::Display) -> Failure {
    Failure::Runtime(e.to_string())
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };

    let common = match &cli.command {
        Command::Simulate(a) => &a.common,
        Command::Backtest(a) => &a.common,
        Command::Garch(a) => &a.common,
        Command::Fit(a) => &a.common,
        Command::Explain(a) => &a.common,
    };
    if let Some(t) = common.threads {
        if t == 0 {
            eprintln!("error: --threads: must be at least 1");
            return 2;
        }
        // a pool may already exist when run() is called twice in-process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    if let Err(e) = fs::create_dir_all(&common.out) {
        eprintln!("error: --out {}: {e}", common.out.display());
        return 1;
    }

    let outcome = match &cli.command {
        Command::Simulate(a) => cmd_simulate(a),
        Command::Backtest(a) => cmd_backtest(a),
        Command::Garch(a) => cmd_garch(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Explain(a) => cmd_explain(a),
    };
    match outcome {
        Ok(warnings) => {
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            if !warnings.is_empty() {
                eprintln!("completed with {} warning(s)", warnings.len());
            }
            0
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            2
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            1
        }
    }
}

fn load_config_file<T: DeserializeOwned + Default>(path: &Option<PathBuf>) -> std::result::Result<T, Failure> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let body = fs::read_to_string(p)
                .map_err(|e| Failure::usage(&format!("--config {}", p.display()), e))?;
            serde_json::from_str(&body)
                .map_err(|e| Failure::usage(&format!("--config {}", p.display()), e))
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("config structs serialize")
}

fn write_sidecar_to(dir: &Path, sidecar: &Sidecar) -> std::result::Result<(), Failure> {
    io::write_sidecar(sidecar, &dir.join("sidecar.json")).map_err(runtime)
}

// ---------------------------------------------------------------------------
// simulate

#[derive(Args, Clone)]
struct SimulateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Sample size (>= 10)
    #[arg(long)]
    n: Option<usize>,
    /// Predictor count
    #[arg(long)]
    p: Option<usize>,
    /// AR(1) coefficient of the error term
    #[arg(long, allow_hyphen_values = true)]
    error_ar: Option<f64>,
    /// Volatility cycle trough
    #[arg(long)]
    vol_low: Option<f64>,
    /// Volatility cycle peak
    #[arg(long)]
    vol_high: Option<f64>,
    /// Sinusoidal volatility cycles over the sample
    #[arg(long)]
    vol_cycles: Option<f64>,
    /// paper | signal_on_high_vol
    #[arg(long)]
    scenario: Option<String>,
    /// Comma-separated per-column AR(1) coefficients (length p)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    ar_coeffs: Option<Vec<f64>>,
    /// Comma-separated true coefficients (length p)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    true_beta: Option<Vec<f64>>,
    /// Monte Carlo replications (0 = single instance only)
    #[arg(long)]
    reps: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(default)]
struct SimulateConfig {
    #[serde(flatten)]
    sim: SimConfig,
    reps: usize,
    solver: SolverConfig,
}

fn cmd_simulate(args: &SimulateArgs) -> CmdResult {
    let mut cfg: SimulateConfig = load_config_file(&args.common.config)?;
    let defaults = SimConfig::default();
    if let Some(n) = args.n {
        cfg.sim.n = n;
    }
    if let Some(p) = args.p {
        cfg.sim.p = p;
    }
    if let Some(v) = args.error_ar {
        cfg.sim.error_ar = v;
    }
    if let Some(v) = args.vol_low {
        cfg.sim.vol_low = v;
    }
    if let Some(v) = args.vol_high {
        cfg.sim.vol_high = v;
    }
    if let Some(v) = args.vol_cycles {
        cfg.sim.vol_cycles = v;
    }
    if let Some(s) = &args.scenario {
        cfg.sim.scenario =
            Scenario::parse(s).ok_or_else(|| Failure::usage("--scenario", format!("unknown scenario '{s}' (expected paper or signal_on_high_vol)")))?;
    }
    if let Some(v) = &args.ar_coeffs {
        cfg.sim.ar_coeffs_x = v.clone();
    }
    if let Some(v) = &args.true_beta {
        cfg.sim.true_beta = v.clone();
    }
    if let Some(r) = args.reps {
        cfg.reps = r;
    }
    if let Some(seed) = args.common.seed {
        cfg.sim.seed = seed;
    }
    // --p alone keeps the default coefficient patterns at the new width
    if cfg.sim.p != defaults.p {
        if args.ar_coeffs.is_none() && cfg.sim.ar_coeffs_x == defaults.ar_coeffs_x {
            cfg.sim.ar_coeffs_x = vec![0.5; cfg.sim.p];
        }
        if args.true_beta.is_none() && cfg.sim.true_beta == defaults.true_beta {
            let mut beta = vec![0.0; cfg.sim.p];
            for (slot, v) in beta.iter_mut().zip([3.0, -2.0]) {
                *slot = v;
            }
            cfg.sim.true_beta = beta;
        }
    }
    cfg.sim.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    cfg.solver.validate().map_err(|e| Failure::Usage(e.to_string()))?;

    let out = &args.common.out;
    let inst = simulate_dgp(&cfg.sim).map_err(runtime)?;
    let dated = io::with_quarterly_index(&inst.dataset, 1986).map_err(runtime)?;
    io::write_dataset_csv(&dated, &out.join("dataset.csv")).map_err(runtime)?;
    io::write_sim_truth_csv(&inst, &out.join("truth.csv")).map_err(runtime)?;

    let table = run_table1(&cfg.sim, &cfg.solver).map_err(runtime)?;
    io::write_coefficient_table_csv(
        &table,
        inst.dataset.column_names(),
        &out.join("coefficients.csv"),
    )
    .map_err(runtime)?;

    if cfg.reps > 0 {
        let report = run_monte_carlo(&cfg.sim, &cfg.solver, cfg.reps).map_err(runtime)?;
        io::write_replication_records_csv(&report, &out.join("replications.csv"))
            .map_err(runtime)?;
        io::write_replication_summary_csv(&report, &out.join("summary.csv")).map_err(runtime)?;
    }

    let sidecar = Sidecar::new("simulate", to_value(&cfg), Some(cfg.sim.seed));
    write_sidecar_to(out, &sidecar)?;
    Ok(Vec::new())
}

// ---------------------------------------------------------------------------
// shared ingest plumbing

#[derive(Args, Clone)]
struct IngestArgs {
    /// Input CSV with a header row and a quarterly date column
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Name of the date column
    #[arg(long)]
    date_column: Option<String>,
    /// Name of the target column
    #[arg(long)]
    target: Option<String>,
    /// Comma-separated predictor subset (default: every other column)
    #[arg(long, value_delimiter = ',')]
    predictors: Option<Vec<String>>,
}

fn resolve_ingest(base: Option<IngestSpec>, args: &IngestArgs) -> std::result::Result<IngestSpec, Failure> {
    let mut spec = match (base, &args.input) {
        (Some(mut spec), input) => {
            if let Some(path) = input {
                spec.path = path.clone();
            }
            spec
        }
        (None, Some(path)) => IngestSpec::new(path.clone(), "DATE", "GDP"),
        (None, None) => {
            return Err(Failure::Usage(
                "--input: an input CSV is required (flag or config file)".into(),
            ))
        }
    };
    if let Some(c) = &args.date_column {
        spec.date_column = c.clone();
    }
    if let Some(c) = &args.target {
        spec.target_column = c.clone();
    }
    if let Some(p) = &args.predictors {
        spec.predictor_columns = Some(p.clone());
    }
    Ok(spec)
}

fn parse_selection(s: &Option<String>) -> std::result::Result<Option<Selection>, Failure> {
    match s {
        None => Ok(None),
        Some(s) => Selection::parse(s).map(Some).ok_or_else(|| {
            Failure::usage(
                "--selection",
                format!("unknown selection '{s}' (expected bic, aic, or rolling_cv)"),
            )
        }),
    }
}

fn parse_vol_transform(s: &Option<String>) -> std::result::Result<Option<VolTransform>, Failure> {
    match s {
        None => Ok(None),
        Some(s) => VolTransform::parse(s).map(Some).ok_or_else(|| {
            Failure::usage(
                "--vol-transform",
                format!("unknown transform '{s}' (expected levels, diff, or log_diff)"),
            )
        }),
    }
}

// ---------------------------------------------------------------------------
// backtest

#[derive(Args, Clone)]
struct BacktestArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    ingest: IngestArgs,
    /// Comma-separated training fractions in (0,1)
    #[arg(long, value_delimiter = ',')]
    fractions: Option<Vec<f64>>,
    /// λ selection: bic | aic | rolling_cv
    #[arg(long)]
    selection: Option<String>,
    /// Volatility-weight exponent γ
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    /// Shock series for GARCH: levels | diff | log_diff
    #[arg(long)]
    vol_transform: Option<String>,
    /// Precomputed weights CSV (applied to every split as-is)
    #[arg(long, value_name = "FILE")]
    weights: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(default)]
struct BacktestConfig {
    ingest: Option<IngestSpec>,
    fractions: Vec<f64>,
    solver: SolverConfig,
    vol: VolWeightConfig,
    weights_file: Option<PathBuf>,
}

fn cmd_backtest(args: &BacktestArgs) -> CmdResult {
    let mut cfg: BacktestConfig = load_config_file(&args.common.config)?;
    let ingest = resolve_ingest(cfg.ingest.take(), &args.ingest)?;
    cfg.ingest = Some(ingest.clone());
    if let Some(f) = &args.fractions {
        cfg.fractions = f.clone();
    }
    if cfg.fractions.is_empty() {
        cfg.fractions = vec![0.7, 0.8, 0.9];
    }
    for f in &cfg.fractions {
        SplitSpec::new(*f).map_err(|e| Failure::usage("--fractions", e))?;
    }
    if let Some(s) = parse_selection(&args.selection)? {
        cfg.solver.selection = s;
    }
    if let Some(g) = args.gamma {
        if !g.is_finite() {
            return Err(Failure::usage("--gamma", "must be finite"));
        }
        cfg.vol.gamma = g;
    }
    if let Some(t) = parse_vol_transform(&args.vol_transform)? {
        cfg.vol.transform = t;
    }
    if let Some(w) = &args.weights {
        cfg.weights_file = Some(w.clone());
    }
    if let Some(seed) = args.common.seed {
        cfg.vol.garch.seed = seed;
    }
    cfg.solver.validate().map_err(|e| Failure::Usage(e.to_string()))?;

    let d = load_csv(&ingest).map_err(runtime)?;
    let fixed = match &cfg.weights_file {
        None => None,
        Some(path) => {
            let (names, _, w) = load_weights(path).map_err(runtime)?;
            if names != d.column_names() {
                return Err(runtime(format!(
                    "weights file {} covers columns [{}] but the dataset has [{}]",
                    path.display(),
                    names.join(", "),
                    d.column_names().join(", ")
                )));
            }
            Some(w)
        }
    };
    let report = run_backtest_with(&d, &cfg.fractions, &cfg.solver, &cfg.vol, fixed.as_ref())
        .map_err(runtime)?;

    let out = &args.common.out;
    io::write_backtest_csv(&report, &out.join("backtest.csv")).map_err(runtime)?;
    io::write_backtest_coefficients_csv(&report, d.column_names(), &out.join("coefficients.csv"))
        .map_err(runtime)?;

    let warnings: Vec<String> = report
        .rows
        .iter()
        .filter_map(|r| {
            r.error
                .as_ref()
                .map(|e| format!("{} at fraction {:.2}: {e}", r.model, r.train_fraction))
        })
        .collect();
    let mut sidecar = Sidecar::new("backtest", to_value(&cfg), Some(cfg.vol.garch.seed));
    sidecar.warnings = warnings.clone();
    write_sidecar_to(out, &sidecar)?;
    Ok(warnings)
}

// ---------------------------------------------------------------------------
// garch

#[derive(Args, Clone)]
struct GarchArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    ingest: IngestArgs,
    /// Volatility-weight exponent γ
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    /// Shock series for GARCH: levels | diff | log_diff
    #[arg(long)]
    vol_transform: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(default)]
struct GarchCliConfig {
    ingest: Option<IngestSpec>,
    vol: VolWeightConfig,
}

fn cmd_garch(args: &GarchArgs) -> CmdResult {
    let mut cfg: GarchCliConfig = load_config_file(&args.common.config)?;
    let ingest = resolve_ingest(cfg.ingest.take(), &args.ingest)?;
    cfg.ingest = Some(ingest.clone());
    if let Some(g) = args.gamma {
        if !g.is_finite() {
            return Err(Failure::usage("--gamma", "must be finite"));
        }
        cfg.vol.gamma = g;
    }
    if let Some(t) = parse_vol_transform(&args.vol_transform)? {
        cfg.vol.transform = t;
    }
    if let Some(seed) = args.common.seed {
        cfg.vol.garch.seed = seed;
    }

    let d = load_csv(&ingest).map_err(runtime)?;
    let fits = column_garch_fits(&d, cfg.vol.transform, &cfg.vol.garch);

    let mut warnings = Vec::new();
    let mut summaries = Vec::with_capacity(fits.len());
    let mut cond_series = Vec::new();
    let mut vols = Vec::with_capacity(fits.len());
    for (name, outcome) in &fits {
        match outcome {
            Ok((fit, v)) => {
                summaries.push(GarchColumnSummary {
                    column: name.clone(),
                    omega: Some(fit.params.omega),
                    alpha: Some(fit.params.alpha),
                    beta: Some(fit.params.beta),
                    loglik: Some(fit.loglik),
                    converged: Some(fit.converged),
                    mean_volatility: Some(*v),
                    error: None,
                });
                cond_series.push((name.clone(), fit.cond_var.clone()));
                vols.push(*v);
            }
            Err(e) => {
                summaries.push(GarchColumnSummary {
                    column: name.clone(),
                    omega: None,
                    alpha: None,
                    beta: None,
                    loglik: None,
                    converged: None,
                    mean_volatility: None,
                    error: Some(e.to_string()),
                });
                warnings.push(format!("column '{name}': {e}"));
            }
        }
    }

    let out = &args.common.out;
    io::write_garch_summary_csv(&summaries, &out.join("garch_summary.csv")).map_err(runtime)?;
    io::write_cond_var_csv(&cond_series, &out.join("cond_var.csv")).map_err(runtime)?;
    if warnings.is_empty() {
        let w = weights_from_volatilities(&vols, cfg.vol.gamma).map_err(runtime)?;
        io::write_weights_csv(d.column_names(), &vols, &w, &out.join("weights.csv"))
            .map_err(runtime)?;
    } else {
        warnings.push("weights.csv skipped: not every column produced a volatility".into());
    }

    let mut sidecar = Sidecar::new("garch", to_value(&cfg), Some(cfg.vol.garch.seed));
    sidecar.warnings = warnings.clone();
    write_sidecar_to(out, &sidecar)?;
    Ok(warnings)
}

// ---------------------------------------------------------------------------
// fit

#[derive(Args, Clone)]
struct FitArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    ingest: IngestArgs,
    /// ols | ridge | lasso | adaptive_lasso | vw_lasso
    #[arg(long)]
    model: Option<String>,
    /// Train on the first ⌊n·fraction⌋ rows (1.0 = all rows)
    #[arg(long)]
    train_fraction: Option<f64>,
    /// λ selection: bic | aic | rolling_cv
    #[arg(long)]
    selection: Option<String>,
    /// Volatility-weight exponent γ
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    /// Shock series for GARCH: levels | diff | log_diff
    #[arg(long)]
    vol_transform: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
struct FitConfig {
    ingest: Option<IngestSpec>,
    model: ModelKind,
    train_fraction: f64,
    solver: SolverConfig,
    vol: VolWeightConfig,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            ingest: None,
            model: ModelKind::VwLasso,
            train_fraction: 1.0,
            solver: SolverConfig::default(),
            vol: VolWeightConfig::default(),
        }
    }
}

fn cmd_fit(args: &FitArgs) -> CmdResult {
    let mut cfg: FitConfig = load_config_file(&args.common.config)?;
    let ingest = resolve_ingest(cfg.ingest.take(), &args.ingest)?;
    cfg.ingest = Some(ingest.clone());
    if let Some(m) = &args.model {
        cfg.model = ModelKind::parse(m).ok_or_else(|| {
            Failure::usage(
                "--model",
                format!("unknown model '{m}' (expected ols, ridge, lasso, adaptive_lasso, or vw_lasso)"),
            )
        })?;
    }
    if let Some(f) = args.train_fraction {
        cfg.train_fraction = f;
    }
    if !(cfg.train_fraction > 0.0 && cfg.train_fraction <= 1.0) {
        return Err(Failure::usage(
            "--train-fraction",
            format!("must lie in (0,1], got {}", cfg.train_fraction),
        ));
    }
    if let Some(s) = parse_selection(&args.selection)? {
        cfg.solver.selection = s;
    }
    if let Some(g) = args.gamma {
        if !g.is_finite() {
            return Err(Failure::usage("--gamma", "must be finite"));
        }
        cfg.vol.gamma = g;
    }
    if let Some(t) = parse_vol_transform(&args.vol_transform)? {
        cfg.vol.transform = t;
    }
    if let Some(seed) = args.common.seed {
        cfg.vol.garch.seed = seed;
    }
    cfg.solver.validate().map_err(|e| Failure::Usage(e.to_string()))?;

    let d = load_csv(&ingest).map_err(runtime)?;
    let train = if cfg.train_fraction < 1.0 {
        let spec = SplitSpec::new(cfg.train_fraction).map_err(runtime)?;
        let (train, _) = crate::evaluate::chronological_split(&d, &spec).map_err(runtime)?;
        train
    } else {
        d.clone()
    };

    let (std_train, info) = standardize(&train).map_err(runtime)?;
    let mut lambda_path: Option<LambdaPath> = None;
    let mut vol_export: Option<(Vec<f64>, PenaltyWeights)> = None;
    let fit_std = match cfg.model {
        ModelKind::Ols => fit_ols(&std_train).map_err(runtime)?,
        ModelKind::Ridge => {
            let path = select_ridge_lambda(&std_train, &cfg.solver).map_err(runtime)?;
            let f = fit_ridge(&std_train, path.chosen_lambda()).map_err(runtime)?;
            lambda_path = Some(path);
            f
        }
        ModelKind::Lasso => {
            let (f, path) = fit_lasso_auto(&std_train, &cfg.solver).map_err(runtime)?;
            lambda_path = Some(path);
            f
        }
        ModelKind::AdaptiveLasso => {
            let (f, path) = fit_adaptive_lasso_auto(&std_train, &cfg.solver).map_err(runtime)?;
            lambda_path = Some(path);
            f
        }
        ModelKind::VwLasso => {
            let vols =
                crate::garch::column_volatilities(&std_train, cfg.vol.transform, &cfg.vol.garch)
                    .map_err(runtime)?;
            let w = weights_from_volatilities(&vols, cfg.vol.gamma).map_err(runtime)?;
            let (f, path) = fit_vw_lasso_auto(&std_train, &w, &cfg.solver).map_err(runtime)?;
            lambda_path = Some(path);
            vol_export = Some((vols, w));
            f
        }
    };
    let fit = destandardize_fit(&fit_std, &info).map_err(runtime)?;

    let out = &args.common.out;
    let saved = SavedFit {
        fit: fit.clone(),
        target_name: d.target_name().to_string(),
        column_names: d.column_names().to_vec(),
        train_fraction: cfg.train_fraction,
        background_means: column_means(&train),
        seed: cfg.vol.garch.seed,
    };
    io::write_fit_json(&saved, &out.join("fit.json")).map_err(runtime)?;
    write_single_fit_csv(&saved, &out.join("coefficients.csv")).map_err(runtime)?;
    if let Some(path) = &lambda_path {
        io::write_lambda_path_csv(path, &out.join("lambda_path.csv")).map_err(runtime)?;
    }
    if let Some((vols, w)) = &vol_export {
        io::write_weights_csv(d.column_names(), vols, w, &out.join("weights.csv"))
            .map_err(runtime)?;
    }

    let mut warnings = Vec::new();
    if !fit.converged {
        warnings.push("solver stopped at the iteration cap; see fit.json".into());
    }
    let mut sidecar = Sidecar::new("fit", to_value(&cfg), Some(cfg.vol.garch.seed));
    sidecar.warnings = warnings.clone();
    write_sidecar_to(out, &sidecar)?;
    Ok(warnings)
}

fn write_single_fit_csv(saved: &SavedFit, path: &Path) -> Result<()> {
    let report = crate::evaluate::BacktestReport {
        dataset_name: saved.target_name.clone(),
        seed: saved.seed,
        rows: vec![crate::evaluate::BacktestRow {
            model: saved.fit.model_kind,
            train_fraction: saved.train_fraction,
            mae: None,
            rmse: None,
            lambda: Some(saved.fit.lambda),
            fit: Some(saved.fit.clone()),
            error: None,
        }],
    };
    io::write_backtest_coefficients_csv(&report, &saved.column_names, path)
}

// ---------------------------------------------------------------------------
// explain

#[derive(Args, Clone)]
struct ExplainArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    ingest: IngestArgs,
    /// Saved fit JSON produced by `vwlasso fit`
    #[arg(long, value_name = "FILE")]
    fit: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(default)]
struct ExplainConfig {
    ingest: Option<IngestSpec>,
    fit_file: Option<PathBuf>,
}

fn cmd_explain(args: &ExplainArgs) -> CmdResult {
    let mut cfg: ExplainConfig = load_config_file(&args.common.config)?;
    let ingest = resolve_ingest(cfg.ingest.take(), &args.ingest)?;
    cfg.ingest = Some(ingest.clone());
    if let Some(f) = &args.fit {
        cfg.fit_file = Some(f.clone());
    }
    let fit_file = cfg.fit_file.clone().ok_or_else(|| {
        Failure::Usage("--fit: a saved fit JSON is required (flag or config file)".into())
    })?;
    if !fit_file.exists() {
        return Err(runtime(format!(
            "fit file '{}' not found; create one with 'vwlasso fit --out <dir>' first",
            fit_file.display()
        )));
    }
    let saved = io::read_fit_json(&fit_file).map_err(runtime)?;
    let d = load_csv(&ingest).map_err(runtime)?;
    if d.column_names() != saved.column_names {
        return Err(runtime(format!(
            "fit was trained on columns [{}] but the dataset has [{}]; pass matching --predictors",
            saved.column_names.join(", "),
            d.column_names().join(", ")
        )));
    }

    let shap = linear_shap(&saved.fit, &d, &saved.background_means).map_err(runtime)?;
    let ranking = importance_ranking(&shap);

    let out = &args.common.out;
    io::write_shap_csv(&shap, d.index().labels(), &out.join("shap_values.csv")).map_err(runtime)?;
    io::write_ranking_csv(&ranking, &out.join("shap_ranking.csv")).map_err(runtime)?;
    io::write_shap_plotdata_csv(&shap, &out.join("shap_plotdata.csv")).map_err(runtime)?;

    let mut sidecar = Sidecar::new("explain", to_value(&cfg), Some(saved.seed));
    sidecar.extra = serde_json::json!({
        "base_value": shap.base_value,
        "model": saved.fit.model_kind.label(),
    });
    write_sidecar_to(out, &sidecar)?;
    Ok(Vec::new())
}

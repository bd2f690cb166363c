//! Experiment runner CLI. All heavy lifting lives in the library; this
//! binary parses flags, applies overrides and writes tables.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use bhdg::dataset::make_split;
use bhdg::experiment::{
    self, ExperimentConfig, RunMetadata, Selector, SensitivityParam,
};
use bhdg::solver::{self, FeatureCount};

#[derive(Parser)]
#[command(
    name = "bhdg",
    about = "Multi-label feature selection experiments: fit, sweep, ablate, and compare"
)]
struct Cli {
    /// TOML experiment config; omit to use a built-in synthetic setup.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Restrict to one configured dataset by name.
    #[arg(long, global = true)]
    dataset: Option<String>,
    /// Selector for `run`/`trace` (bhdg, bhdg1, bhdg2, random, variance).
    #[arg(long, global = true)]
    variant: Option<String>,
    /// Run seed (overrides the first sweep seed for single runs).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (overrides the config's out_dir).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    lambda1: Option<f64>,
    #[arg(long, global = true)]
    lambda2: Option<f64>,
    #[arg(long, global = true)]
    lambda3: Option<f64>,
    /// Initial ALM penalty.
    #[arg(long, global = true)]
    rho: Option<f64>,
    /// ALM penalty step factor.
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Hash-code length (defaults to half the label count).
    #[arg(long, global = true)]
    code_length: Option<usize>,
    /// Neighbor count for similarity graphs.
    #[arg(long, global = true)]
    knn: Option<usize>,
    /// Gaussian kernel width.
    #[arg(long, global = true)]
    sigma: Option<f64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one cell (fit, select, classify, evaluate) and write the row plus
    /// the solver trace.
    Run {
        /// Fraction of features to keep.
        #[arg(long, default_value_t = 0.2)]
        features: f64,
    },
    /// Feature-fraction sweep over datasets, variants and seeds.
    Sweep,
    /// Vary one hyperparameter (or all five) over its grid.
    Sensitivity {
        /// lambda1 | lambda2 | lambda3 | rho | alpha
        #[arg(long)]
        param: Option<String>,
    },
    /// Compare the full model against its two ablations.
    Ablation,
    /// Friedman / Nemenyi report over a previously written result table.
    Stats {
        /// Result CSV produced by `run`, `sweep` or `ablation`.
        #[arg(long)]
        input: PathBuf,
    },
    /// Run the solver once and write the per-iteration objective trace.
    Trace,
}

fn load_config(cli: &Cli) -> bhdg::Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::from_toml_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.out_dir = out.clone();
    }
    if let Some(name) = &cli.dataset {
        cfg.datasets.retain(|d| d.name() == name);
        if cfg.datasets.is_empty() {
            return Err(bhdg::Error::Config(format!(
                "no configured dataset named `{name}`"
            )));
        }
    }
    let hp = &mut cfg.hyperparams;
    if let Some(v) = cli.max_iter {
        hp.max_iter = v;
    }
    if let Some(v) = cli.tol {
        hp.tol = v;
    }
    if let Some(v) = cli.lambda1 {
        hp.lambda1 = v;
    }
    if let Some(v) = cli.lambda2 {
        hp.lambda2 = v;
    }
    if let Some(v) = cli.lambda3 {
        hp.lambda3 = v;
    }
    if let Some(v) = cli.rho {
        hp.rho0 = v;
    }
    if let Some(v) = cli.alpha {
        hp.alpha = v;
    }
    if let Some(v) = cli.code_length {
        hp.code_length = Some(v);
    }
    if let Some(v) = cli.knn {
        hp.k = v;
    }
    if let Some(v) = cli.sigma {
        hp.sigma = v;
    }
    if let Some(v) = cli.seed {
        hp.seed = v;
        cfg.sweep.seeds = vec![v];
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Runs one cell on the first (or named) dataset; shared by `run` and
/// `trace`.
fn single_cell(
    cli: &Cli,
    cfg: &ExperimentConfig,
    features: f64,
) -> bhdg::Result<(experiment::CellOutcome, String)> {
    let spec = &cfg.datasets[0];
    let ds = spec.load()?;
    let split = make_split(
        ds.n_instances(),
        cfg.split.train_fraction,
        cfg.split.seed.wrapping_add(cfg.hyperparams.seed),
    )?;
    let selector: Selector = cli
        .variant
        .as_deref()
        .unwrap_or("bhdg")
        .parse()?;
    let outcome = experiment::run_cell(
        &ds,
        &split,
        &cfg.hyperparams,
        selector,
        FeatureCount::Fraction(features),
        &cfg.mlknn,
    )?;
    let stem = format!(
        "{}_{}_{}",
        outcome.row.dataset, outcome.row.selector, outcome.row.seed
    );
    Ok((outcome, stem))
}

fn run(cli: &Cli) -> bhdg::Result<()> {
    let started = Instant::now();
    let cfg = load_config(cli)?;
    fs::create_dir_all(&cfg.out_dir)?;
    let hash = cfg.hash();
    let mut outputs = Vec::new();
    let command;

    match &cli.cmd {
        Cmd::Run { features } => {
            command = "run";
            let (outcome, stem) = single_cell(cli, &cfg, *features)?;
            let row_path = cfg.out_dir.join(format!("run_{stem}.csv"));
            experiment::write_results_csv(&row_path, &hash, std::slice::from_ref(&outcome.row))?;
            outputs.push(row_path);
            if !outcome.trace.is_empty() {
                let trace_path = cfg.out_dir.join(format!("trace_{stem}.csv"));
                solver::write_trace_csv(&outcome.trace, fs::File::create(&trace_path)?)?;
                outputs.push(trace_path);
            }
            let r = &outcome.row;
            println!(
                "{} / {} (seed {}): status={} features={} iterations={}",
                r.dataset, r.selector, r.seed, r.status, r.feature_count, r.iterations
            );
            if let (Some(hl), Some(ap)) = (r.hl, r.ap) {
                println!(
                    "  hl={hl:.4} rl={:.4} oe={:.4} cv={:.4} ap={ap:.4} macro_f1={:.4}",
                    r.rl.unwrap_or(f64::NAN),
                    r.oe.unwrap_or(f64::NAN),
                    r.cv.unwrap_or(f64::NAN),
                    r.macro_f1.unwrap_or(f64::NAN),
                );
            }
        }
        Cmd::Sweep => {
            command = "sweep";
            let rows = experiment::run_sweep(&cfg)?;
            let path = cfg.out_dir.join("sweep.csv");
            experiment::write_results_csv(&path, &hash, &rows)?;
            println!("wrote {} rows to {}", rows.len(), path.display());
            outputs.push(path);
        }
        Cmd::Sensitivity { param } => {
            command = "sensitivity";
            let param = param
                .as_deref()
                .map(str::parse::<SensitivityParam>)
                .transpose()?;
            let rows = experiment::run_sensitivity(&cfg, param)?;
            let path = cfg.out_dir.join("sensitivity.csv");
            experiment::write_sensitivity_csv(&path, &hash, &rows)?;
            println!("wrote {} rows to {}", rows.len(), path.display());
            outputs.push(path);
        }
        Cmd::Ablation => {
            command = "ablation";
            let rows = experiment::run_ablation(&cfg)?;
            let path = cfg.out_dir.join("ablation.csv");
            experiment::write_ablation_csv(&path, &hash, &rows)?;
            for r in &rows {
                println!(
                    "{} / {}: wins={} ap={}",
                    r.dataset,
                    r.variant.name(),
                    r.wins,
                    r.means[4].map(|v| format!("{v:.4}")).unwrap_or_default()
                );
            }
            outputs.push(path);
        }
        Cmd::Stats { input } => {
            command = "stats";
            let rows = experiment::read_results_csv(input)?;
            let report = experiment::report_stats(&rows)?;
            for m in &report {
                let ff = m
                    .ff
                    .map(|v| format!("{v:.4}"))
                    .unwrap_or_else(|| "degenerate".into());
                println!("{}: chi2={:.4} F_F={} CD={:.4}", m.metric, m.chi2, ff, m.cd);
            }
            outputs.extend(experiment::write_stats_report(&cfg.out_dir, &hash, &report)?);
        }
        Cmd::Trace => {
            command = "trace";
            let (outcome, stem) = single_cell(cli, &cfg, 0.2)?;
            let trace_path = cfg.out_dir.join(format!("trace_{stem}.csv"));
            solver::write_trace_csv(&outcome.trace, fs::File::create(&trace_path)?)?;
            for r in &outcome.trace {
                println!("iter {:>3}: objective {:.6e} (bz_gap {:.3e})", r.iter, r.objective, r.bz_gap);
            }
            println!("wrote {}", trace_path.display());
            outputs.push(trace_path);
        }
    }

    experiment::write_metadata(
        &cfg.out_dir,
        &RunMetadata {
            command: command.into(),
            config_hash: hash,
            outputs,
            wall_time_s: started.elapsed().as_secs_f64(),
        },
    )?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

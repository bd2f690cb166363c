//! Experiment orchestration: declarative configuration, single pipeline
//! cells (fit -> select -> ML-KNN -> metrics), feature sweeps, sensitivity
//! grids, ablations, and rank-statistics reports.
//!
//! Output tables are CSV with a `# config_hash=...` first line; everything in
//! them is reproducible byte-for-byte under a fixed config. Wall-clock times
//! never enter the tables (they go to the JSON metadata, which is the one
//! non-deterministic output).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::baseline;
use crate::dataset::{self, Dataset, MinMaxScaler, Split};
use crate::error::{Error, Result};
use crate::metrics::{self, MetricReport};
use crate::mlknn::MlKnn;
use crate::solver::{self, FeatureCount, HyperParams, TraceRecord, Variant};
use crate::stats;
use crate::synth::{self, PlantedConfig};

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

/// Where a dataset comes from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DatasetSpec {
    /// Mulan convention: ARFF data plus label-list XML.
    Arff {
        name: String,
        arff: PathBuf,
        xml: PathBuf,
    },
    /// Two CSV files (features, binary labels).
    Csv {
        name: String,
        features: PathBuf,
        labels: PathBuf,
    },
    /// Synthetic planted-feature task.
    Planted {
        name: String,
        #[serde(flatten)]
        cfg: PlantedConfig,
    },
    /// Synthetic task where feature 0 determines every label.
    SingleFeature {
        name: String,
        n: usize,
        d: usize,
        c: usize,
        seed: u64,
    },
}

impl DatasetSpec {
    pub fn name(&self) -> &str {
        match self {
            DatasetSpec::Arff { name, .. }
            | DatasetSpec::Csv { name, .. }
            | DatasetSpec::Planted { name, .. }
            | DatasetSpec::SingleFeature { name, .. } => name,
        }
    }

    pub fn load(&self) -> Result<Dataset> {
        let mut ds = match self {
            DatasetSpec::Arff { arff, xml, .. } => dataset::load_arff(arff, xml)?,
            DatasetSpec::Csv {
                features, labels, ..
            } => dataset::load_csv(features, labels)?,
            DatasetSpec::Planted { cfg, .. } => synth::planted(cfg)?.0,
            DatasetSpec::SingleFeature { n, d, c, seed, .. } => {
                synth::single_feature(*n, *d, *c, *seed)?
            }
        };
        ds.name = self.name().to_string();
        Ok(ds)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train_fraction: 0.5,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct MlKnnConfig {
    pub k: usize,
    pub smoothing: f64,
}

impl Default for MlKnnConfig {
    fn default() -> Self {
        MlKnnConfig {
            k: 10,
            smoothing: 1.0,
        }
    }
}

/// Feature-fraction sweep settings. When neither `fractions` nor `counts`
/// are given, small feature spaces (d < 50) sweep absolute counts 2..=14 and
/// larger ones sweep 2%..20% in 1% steps.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    pub variants: Vec<Variant>,
    pub seeds: Vec<u64>,
    pub fractions: Option<Vec<f64>>,
    pub counts: Option<Vec<usize>>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            variants: vec![Variant::Bhdg],
            seeds: vec![1],
            fractions: None,
            counts: None,
        }
    }
}

/// Hyperparameter grids for sensitivity runs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct Grids {
    pub lambda: Vec<f64>,
    pub alpha: Vec<f64>,
    pub rho: Vec<f64>,
}

impl Default for Grids {
    fn default() -> Self {
        Grids {
            lambda: vec![0.01, 0.1, 1.0, 10.0, 100.0, 1000.0],
            alpha: vec![0.1, 0.3, 0.5, 0.7, 0.9, 1.0],
            rho: vec![0.01, 0.05, 0.1, 0.15, 0.2, 0.25],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub out_dir: PathBuf,
    /// Worker threads for independent cells; 0 means "let the runtime pick".
    pub workers: usize,
    pub datasets: Vec<DatasetSpec>,
    pub split: SplitSpec,
    pub hyperparams: HyperParams,
    pub mlknn: MlKnnConfig,
    pub sweep: SweepConfig,
    pub grids: Grids,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            out_dir: PathBuf::from("results"),
            workers: 0,
            datasets: vec![DatasetSpec::Planted {
                name: "planted".into(),
                cfg: PlantedConfig::default(),
            }],
            split: SplitSpec::default(),
            hyperparams: HyperParams::default(),
            mlknn: MlKnnConfig::default(),
            sweep: SweepConfig::default(),
            grids: Grids::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path.as_ref())?;
        let cfg: ExperimentConfig =
            toml::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.datasets.is_empty() {
            return Err(Error::Config("no datasets configured".into()));
        }
        if !(self.split.train_fraction > 0.0 && self.split.train_fraction < 1.0) {
            return Err(Error::Config(format!(
                "split.train_fraction must lie in (0, 1), got {}",
                self.split.train_fraction
            )));
        }
        self.hyperparams.validate()?;
        if self.sweep.variants.is_empty() || self.sweep.seeds.is_empty() {
            return Err(Error::Config("sweep.variants and sweep.seeds must be non-empty".into()));
        }
        if let Some(fractions) = &self.sweep.fractions {
            if fractions.is_empty() {
                return Err(Error::Config("sweep.fractions must be non-empty when given".into()));
            }
            if let Some(f) = fractions.iter().find(|f| !(**f > 0.0 && **f <= 1.0)) {
                return Err(Error::Config(format!(
                    "sweep fraction {f} out of range (0, 1]"
                )));
            }
        }
        if let Some(counts) = &self.sweep.counts {
            if counts.is_empty() || counts.contains(&0) {
                return Err(Error::Config("sweep.counts must be non-empty positive".into()));
            }
        }
        if self.grids.lambda.is_empty() || self.grids.alpha.is_empty() || self.grids.rho.is_empty()
        {
            return Err(Error::Config("grids must be non-empty".into()));
        }
        Ok(())
    }

    /// Short hex digest of the canonical serialized config; recorded in
    /// every output table header.
    pub fn hash(&self) -> String {
        let canonical = toml::to_string(self).unwrap_or_default();
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    /// Feature specs the sweep should visit for a `d`-dimensional dataset.
    pub fn feature_specs(&self, d: usize) -> Vec<FeatureCount> {
        if let Some(counts) = &self.sweep.counts {
            return counts.iter().map(|&k| FeatureCount::Count(k)).collect();
        }
        if let Some(fractions) = &self.sweep.fractions {
            return fractions.iter().map(|&f| FeatureCount::Fraction(f)).collect();
        }
        if d < 50 {
            (2..=14.min(d)).map(FeatureCount::Count).collect()
        } else {
            (2..=20).map(|p| FeatureCount::Fraction(p as f64 / 100.0)).collect()
        }
    }
}

// ---------------------------------------------------------------------------
// Cells
// ---------------------------------------------------------------------------

/// What ranks the features in a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selector {
    Bhdg(Variant),
    Random,
    Variance,
}

impl Selector {
    pub fn name(&self) -> &'static str {
        match self {
            Selector::Bhdg(v) => v.name(),
            Selector::Random => "random",
            Selector::Variance => "variance",
        }
    }
}

impl FromStr for Selector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "random" => Ok(Selector::Random),
            "variance" => Ok(Selector::Variance),
            other => Ok(Selector::Bhdg(other.parse()?)),
        }
    }
}

/// One row of a result table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultRow {
    pub dataset: String,
    pub selector: String,
    pub seed: u64,
    pub feature_count: usize,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub rho0: f64,
    pub alpha: f64,
    /// `ok` or `diverged`.
    pub status: String,
    pub iterations: usize,
    pub hl: Option<f64>,
    pub rl: Option<f64>,
    pub oe: Option<f64>,
    pub cv: Option<f64>,
    pub ap: Option<f64>,
    pub macro_f1: Option<f64>,
    /// Not written to tables (it would break byte-level reproducibility).
    #[serde(skip)]
    pub wall_time_s: f64,
}

impl ResultRow {
    pub fn metric(&self, name: &str) -> Option<f64> {
        match name {
            "hl" => self.hl,
            "rl" => self.rl,
            "oe" => self.oe,
            "cv" => self.cv,
            "ap" => self.ap,
            "macro_f1" => self.macro_f1,
            _ => None,
        }
    }

    fn set_metrics(&mut self, report: &MetricReport) {
        self.hl = Some(report.hamming_loss);
        self.rl = Some(report.ranking_loss);
        self.oe = Some(report.one_error);
        self.cv = Some(report.coverage);
        self.ap = Some(report.average_precision);
        self.macro_f1 = Some(report.macro_f1);
    }
}

/// A finished cell: the result row plus the solver trace (empty for the
/// baseline selectors and for diverged runs).
#[derive(Debug, Clone)]
pub struct CellOutcome {
    pub row: ResultRow,
    pub trace: Vec<TraceRecord>,
}

/// Runs one pipeline cell: scale on the training statistics, rank features,
/// keep the requested number, train ML-KNN on the kept columns and evaluate
/// the six metrics on the test split. Solver divergence flags the row
/// instead of failing the run.
pub fn run_cell(
    ds: &Dataset,
    split: &Split,
    hp: &HyperParams,
    selector: Selector,
    feature_spec: FeatureCount,
    mlknn_cfg: &MlKnnConfig,
) -> Result<CellOutcome> {
    let started = Instant::now();
    let (x_train_raw, y_train) = ds.subset(&split.train_indices);
    let (x_test_raw, y_test) = ds.subset(&split.test_indices);
    let scaler = MinMaxScaler::fit(&x_train_raw);
    let x_train = scaler.transform(&x_train_raw);
    let x_test = scaler.transform(&x_test_raw);

    let mut row = ResultRow {
        dataset: ds.name.clone(),
        selector: selector.name().to_string(),
        seed: hp.seed,
        feature_count: 0,
        lambda1: hp.lambda1,
        lambda2: hp.lambda2,
        lambda3: hp.lambda3,
        rho0: hp.rho0,
        alpha: hp.alpha,
        status: "ok".into(),
        iterations: 0,
        hl: None,
        rl: None,
        oe: None,
        cv: None,
        ap: None,
        macro_f1: None,
        wall_time_s: 0.0,
    };

    let (ranking, trace) = match selector {
        Selector::Bhdg(variant) => match solver::fit(&x_train, &y_train, hp, variant) {
            Ok((ranking, state)) => {
                row.iterations = state.iter;
                (ranking, state.trace)
            }
            Err(Error::Diverged { iter, .. }) => {
                row.status = "diverged".into();
                row.iterations = iter;
                row.wall_time_s = started.elapsed().as_secs_f64();
                return Ok(CellOutcome {
                    row,
                    trace: Vec::new(),
                });
            }
            Err(e) => return Err(e),
        },
        Selector::Random => (baseline::random_ranking(ds.n_features(), hp.seed), Vec::new()),
        Selector::Variance => (baseline::variance_ranking(&x_train), Vec::new()),
    };

    let selected = solver::select_top(&ranking, feature_spec)?;
    row.feature_count = selected.len();
    let x_train_sel = x_train.select(ndarray::Axis(1), &selected);
    let x_test_sel = x_test.select(ndarray::Axis(1), &selected);
    let model = MlKnn::train(&x_train_sel, &y_train, mlknn_cfg.k, mlknn_cfg.smoothing)?;
    let (hard, ranks) = model.predict(&x_test_sel)?;
    let report = metrics::evaluate(&hard, &ranks, &y_test)?;
    row.set_metrics(&report);
    row.wall_time_s = started.elapsed().as_secs_f64();
    Ok(CellOutcome { row, trace })
}

/// Split seed for a cell: the base split seed shifted by the run seed, so
/// repeated seeds re-draw both the partition and the solver init.
fn cell_split_seed(base: u64, run_seed: u64) -> u64 {
    base.wrapping_add(run_seed)
}

fn in_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> T {
    if workers == 0 {
        job()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("thread pool")
            .install(job)
    }
}

// ---------------------------------------------------------------------------
// Sweeps, sensitivity, ablation
// ---------------------------------------------------------------------------

/// One planned cell of a sweep.
#[derive(Debug, Clone)]
struct CellPlan {
    ds_index: usize,
    selector: Selector,
    feature_spec: FeatureCount,
    seed: u64,
}

/// Feature-fraction sweep over dataset x variant x feature-spec x seed.
/// Returns rows in plan order (deterministic).
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let datasets: Vec<Dataset> = cfg
        .datasets
        .iter()
        .map(|spec| spec.load())
        .collect::<Result<_>>()?;

    let mut plans = Vec::new();
    for (ds_index, ds) in datasets.iter().enumerate() {
        for spec in cfg.feature_specs(ds.n_features()) {
            for variant in &cfg.sweep.variants {
                for &seed in &cfg.sweep.seeds {
                    plans.push(CellPlan {
                        ds_index,
                        selector: Selector::Bhdg(*variant),
                        feature_spec: spec,
                        seed,
                    });
                }
            }
        }
    }
    run_plans(cfg, &datasets, &plans)
}

fn run_plans(
    cfg: &ExperimentConfig,
    datasets: &[Dataset],
    plans: &[CellPlan],
) -> Result<Vec<ResultRow>> {
    let outcomes: Result<Vec<CellOutcome>> = in_pool(cfg.workers, || {
        plans
            .par_iter()
            .map(|plan| {
                let ds = &datasets[plan.ds_index];
                let split = dataset::make_split(
                    ds.n_instances(),
                    cfg.split.train_fraction,
                    cell_split_seed(cfg.split.seed, plan.seed),
                )?;
                let mut hp = cfg.hyperparams.clone();
                hp.seed = plan.seed;
                run_cell(ds, &split, &hp, plan.selector, plan.feature_spec, &cfg.mlknn)
            })
            .collect()
    });
    Ok(outcomes?.into_iter().map(|o| o.row).collect())
}

/// The parameter varied by a sensitivity run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SensitivityParam {
    Lambda1,
    Lambda2,
    Lambda3,
    Rho,
    Alpha,
}

impl SensitivityParam {
    pub const ALL: [SensitivityParam; 5] = [
        SensitivityParam::Lambda1,
        SensitivityParam::Lambda2,
        SensitivityParam::Lambda3,
        SensitivityParam::Rho,
        SensitivityParam::Alpha,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SensitivityParam::Lambda1 => "lambda1",
            SensitivityParam::Lambda2 => "lambda2",
            SensitivityParam::Lambda3 => "lambda3",
            SensitivityParam::Rho => "rho",
            SensitivityParam::Alpha => "alpha",
        }
    }

    fn grid<'a>(&self, grids: &'a Grids) -> &'a [f64] {
        match self {
            SensitivityParam::Lambda1 | SensitivityParam::Lambda2 | SensitivityParam::Lambda3 => {
                &grids.lambda
            }
            SensitivityParam::Rho => &grids.rho,
            SensitivityParam::Alpha => &grids.alpha,
        }
    }

    fn apply(&self, hp: &mut HyperParams, value: f64) {
        match self {
            SensitivityParam::Lambda1 => hp.lambda1 = value,
            SensitivityParam::Lambda2 => hp.lambda2 = value,
            SensitivityParam::Lambda3 => hp.lambda3 = value,
            SensitivityParam::Rho => hp.rho0 = value,
            SensitivityParam::Alpha => hp.alpha = value,
        }
    }
}

impl FromStr for SensitivityParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lambda1" => Ok(SensitivityParam::Lambda1),
            "lambda2" => Ok(SensitivityParam::Lambda2),
            "lambda3" => Ok(SensitivityParam::Lambda3),
            "rho" => Ok(SensitivityParam::Rho),
            "alpha" => Ok(SensitivityParam::Alpha),
            other => Err(Error::Param(format!("unknown sensitivity parameter `{other}`"))),
        }
    }
}

/// Recommended operating point used as the fixed base for sensitivity runs.
pub fn recommended_hyperparams(base: &HyperParams) -> HyperParams {
    HyperParams {
        lambda1: 1000.0,
        lambda2: 10.0,
        lambda3: 1000.0,
        rho0: 0.01,
        alpha: 1.0,
        ..base.clone()
    }
}

/// One sensitivity row: the varied parameter and its value, plus the cell.
#[derive(Debug, Clone)]
pub struct SensitivityRow {
    pub param: &'static str,
    pub value: f64,
    pub row: ResultRow,
}

/// Varies one parameter (or all five) over its grid with the others pinned
/// at the recommended operating point; selection fixed at the 20% mark.
pub fn run_sensitivity(
    cfg: &ExperimentConfig,
    param: Option<SensitivityParam>,
) -> Result<Vec<SensitivityRow>> {
    cfg.validate()?;
    let params: Vec<SensitivityParam> = match param {
        Some(p) => vec![p],
        None => SensitivityParam::ALL.to_vec(),
    };
    let datasets: Vec<Dataset> = cfg
        .datasets
        .iter()
        .map(|spec| spec.load())
        .collect::<Result<_>>()?;
    let base = recommended_hyperparams(&cfg.hyperparams);

    let mut jobs = Vec::new();
    for p in &params {
        for &value in p.grid(&cfg.grids) {
            for (ds_index, _) in datasets.iter().enumerate() {
                for &seed in &cfg.sweep.seeds {
                    jobs.push((*p, value, ds_index, seed));
                }
            }
        }
    }
    let rows: Result<Vec<SensitivityRow>> = in_pool(cfg.workers, || {
        jobs.par_iter()
            .map(|&(p, value, ds_index, seed)| {
                let ds = &datasets[ds_index];
                let split = dataset::make_split(
                    ds.n_instances(),
                    cfg.split.train_fraction,
                    cell_split_seed(cfg.split.seed, seed),
                )?;
                let mut hp = base.clone();
                hp.seed = seed;
                p.apply(&mut hp, value);
                let outcome = run_cell(
                    ds,
                    &split,
                    &hp,
                    Selector::Bhdg(Variant::Bhdg),
                    FeatureCount::Fraction(0.2),
                    &cfg.mlknn,
                )?;
                Ok(SensitivityRow {
                    param: p.name(),
                    value,
                    row: outcome.row,
                })
            })
            .collect()
    });
    rows
}

/// Mean metrics for one (dataset, variant) ablation cell plus the number of
/// metrics on which the variant is the best for its dataset.
#[derive(Debug, Clone)]
pub struct AblationRow {
    pub dataset: String,
    pub variant: Variant,
    pub means: [Option<f64>; 6],
    pub wins: usize,
}

/// Runs all three variants at the 20% mark over the configured seeds and
/// counts per-dataset wins across the six metrics (ties win for everyone).
pub fn run_ablation(cfg: &ExperimentConfig) -> Result<Vec<AblationRow>> {
    cfg.validate()?;
    let datasets: Vec<Dataset> = cfg
        .datasets
        .iter()
        .map(|spec| spec.load())
        .collect::<Result<_>>()?;

    let mut plans = Vec::new();
    for (ds_index, _) in datasets.iter().enumerate() {
        for variant in Variant::ALL {
            for &seed in &cfg.sweep.seeds {
                plans.push(CellPlan {
                    ds_index,
                    selector: Selector::Bhdg(variant),
                    feature_spec: FeatureCount::Fraction(0.2),
                    seed,
                });
            }
        }
    }
    let rows = run_plans(cfg, &datasets, &plans)?;

    let metric_names = ["hl", "rl", "oe", "cv", "ap", "macro_f1"];
    let higher_better = [false, false, false, false, true, true];
    let mut out = Vec::new();
    for ds in &datasets {
        let mut per_variant: Vec<(Variant, [Option<f64>; 6])> = Vec::new();
        for variant in Variant::ALL {
            let matching: Vec<&ResultRow> = rows
                .iter()
                .filter(|r| r.dataset == ds.name && r.selector == variant.name() && r.status == "ok")
                .collect();
            let mut means = [None; 6];
            if !matching.is_empty() {
                for (slot, name) in metric_names.iter().enumerate() {
                    let values: Vec<f64> =
                        matching.iter().filter_map(|r| r.metric(name)).collect();
                    if !values.is_empty() {
                        means[slot] = Some(values.iter().sum::<f64>() / values.len() as f64);
                    }
                }
            }
            per_variant.push((variant, means));
        }
        // win counting: per metric, the best mean takes a win; exact ties share
        let mut wins = [0usize; 3];
        for slot in 0..6 {
            let candidates: Vec<(usize, f64)> = per_variant
                .iter()
                .enumerate()
                .filter_map(|(vi, (_, means))| means[slot].map(|m| (vi, m)))
                .collect();
            if candidates.is_empty() {
                continue;
            }
            let best = candidates
                .iter()
                .map(|&(_, m)| m)
                .reduce(|a, b| {
                    if higher_better[slot] {
                        a.max(b)
                    } else {
                        a.min(b)
                    }
                })
                .unwrap();
            for &(vi, m) in &candidates {
                if m == best {
                    wins[vi] += 1;
                }
            }
        }
        for (vi, (variant, means)) in per_variant.into_iter().enumerate() {
            out.push(AblationRow {
                dataset: ds.name.clone(),
                variant,
                means,
                wins: wins[vi],
            });
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Statistics report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct MetricStats {
    pub metric: String,
    pub methods: Vec<String>,
    pub avg_ranks: Vec<f64>,
    pub chi2: f64,
    /// `None` when the F_F denominator degenerates (perfectly consistent
    /// rankings).
    pub ff: Option<f64>,
    pub cd: f64,
}

/// Builds per-metric rank tables (methods = selectors, rows = datasets, cell
/// value = mean over matching result rows), then the Friedman statistic and
/// the Nemenyi critical difference for each metric.
pub fn report_stats(rows: &[ResultRow]) -> Result<Vec<MetricStats>> {
    let mut methods: Vec<String> = rows.iter().map(|r| r.selector.clone()).collect();
    methods.sort();
    methods.dedup();
    let mut datasets: Vec<String> = rows.iter().map(|r| r.dataset.clone()).collect();
    datasets.sort();
    datasets.dedup();
    if methods.len() < 2 {
        return Err(Error::Stats(format!(
            "need at least two selectors to compare, got {methods:?}"
        )));
    }
    if datasets.is_empty() {
        return Err(Error::Stats("no result rows".into()));
    }

    let metric_names = ["hl", "rl", "oe", "cv", "ap", "macro_f1"];
    let higher_better = [false, false, false, false, true, true];
    let mut out = Vec::new();
    for (name, higher) in metric_names.iter().zip(higher_better) {
        let mut values = Array2::<f64>::zeros((datasets.len(), methods.len()));
        for (di, ds) in datasets.iter().enumerate() {
            for (mi, method) in methods.iter().enumerate() {
                let cell: Vec<f64> = rows
                    .iter()
                    .filter(|r| &r.dataset == ds && &r.selector == method && r.status == "ok")
                    .filter_map(|r| r.metric(name))
                    .collect();
                if cell.is_empty() {
                    return Err(Error::Stats(format!(
                        "no `{name}` values for selector `{method}` on dataset `{ds}`"
                    )));
                }
                values[[di, mi]] = cell.iter().sum::<f64>() / cell.len() as f64;
            }
        }
        let table = stats::RankTable::new(methods.clone(), datasets.clone(), values, higher)?;
        let avg_ranks = stats::average_ranks(&table)?;
        let (chi2, ff) = match stats::friedman(&avg_ranks, datasets.len()) {
            Ok((chi2, ff)) => (chi2, Some(ff)),
            Err(_) => {
                // perfectly consistent ranks: chi2 = N(K-1), F_F undefined
                let k = methods.len() as f64;
                (datasets.len() as f64 * (k - 1.0), None)
            }
        };
        let cd = stats::nemenyi_cd(methods.len(), datasets.len(), 0.05)?;
        out.push(MetricStats {
            metric: name.to_string(),
            methods: methods.clone(),
            avg_ranks,
            chi2,
            ff,
            cd,
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Table IO
// ---------------------------------------------------------------------------

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

const RESULT_HEADER: &str = "dataset,selector,seed,feature_count,lambda1,lambda2,lambda3,rho0,alpha,status,iterations,hl,rl,oe,cv,ap,macro_f1";

fn result_line(r: &ResultRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        r.dataset,
        r.selector,
        r.seed,
        r.feature_count,
        r.lambda1,
        r.lambda2,
        r.lambda3,
        r.rho0,
        r.alpha,
        r.status,
        r.iterations,
        fmt_opt(r.hl),
        fmt_opt(r.rl),
        fmt_opt(r.oe),
        fmt_opt(r.cv),
        fmt_opt(r.ap),
        fmt_opt(r.macro_f1),
    )
}

/// Writes a result table with the config hash in the header comment.
pub fn write_results_csv(path: impl AsRef<Path>, config_hash: &str, rows: &[ResultRow]) -> Result<()> {
    let mut f = fs::File::create(path.as_ref())?;
    writeln!(f, "# config_hash={config_hash}")?;
    writeln!(f, "{RESULT_HEADER}")?;
    for r in rows {
        writeln!(f, "{}", result_line(r))?;
    }
    Ok(())
}

/// Reads a result table written by [`write_results_csv`].
pub fn read_results_csv(path: impl AsRef<Path>) -> Result<Vec<ResultRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path.as_ref())
        .map_err(|e| Error::Config(e.to_string()))?;
    let parse_opt = |s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse::<f64>()
                .map(Some)
                .map_err(|e| Error::Config(format!("bad metric value `{s}`: {e}")))
        }
    };
    let mut rows = Vec::new();
    for record in reader.deserialize::<std::collections::HashMap<String, String>>() {
        let record = record.map_err(|e| Error::Config(e.to_string()))?;
        let get = |key: &str| -> Result<String> {
            record
                .get(key)
                .cloned()
                .ok_or_else(|| Error::Config(format!("missing column `{key}`")))
        };
        let num = |key: &str| -> Result<f64> {
            get(key)?
                .parse()
                .map_err(|e| Error::Config(format!("bad `{key}`: {e}")))
        };
        rows.push(ResultRow {
            dataset: get("dataset")?,
            selector: get("selector")?,
            seed: get("seed")?.parse().unwrap_or(0),
            feature_count: get("feature_count")?.parse().unwrap_or(0),
            lambda1: num("lambda1")?,
            lambda2: num("lambda2")?,
            lambda3: num("lambda3")?,
            rho0: num("rho0")?,
            alpha: num("alpha")?,
            status: get("status")?,
            iterations: get("iterations")?.parse().unwrap_or(0),
            hl: parse_opt(&get("hl")?)?,
            rl: parse_opt(&get("rl")?)?,
            oe: parse_opt(&get("oe")?)?,
            cv: parse_opt(&get("cv")?)?,
            ap: parse_opt(&get("ap")?)?,
            macro_f1: parse_opt(&get("macro_f1")?)?,
            wall_time_s: 0.0,
        });
    }
    Ok(rows)
}

/// Writes sensitivity rows (param/value columns prepended).
pub fn write_sensitivity_csv(
    path: impl AsRef<Path>,
    config_hash: &str,
    rows: &[SensitivityRow],
) -> Result<()> {
    let mut f = fs::File::create(path.as_ref())?;
    writeln!(f, "# config_hash={config_hash}")?;
    writeln!(f, "param,value,{RESULT_HEADER}")?;
    for r in rows {
        writeln!(f, "{},{},{}", r.param, r.value, result_line(&r.row))?;
    }
    Ok(())
}

/// Writes ablation rows (mean metrics and win counts).
pub fn write_ablation_csv(
    path: impl AsRef<Path>,
    config_hash: &str,
    rows: &[AblationRow],
) -> Result<()> {
    let mut f = fs::File::create(path.as_ref())?;
    writeln!(f, "# config_hash={config_hash}")?;
    writeln!(f, "dataset,variant,hl,rl,oe,cv,ap,macro_f1,wins")?;
    for r in rows {
        writeln!(
            f,
            "{},{},{},{},{},{},{},{},{}",
            r.dataset,
            r.variant.name(),
            fmt_opt(r.means[0]),
            fmt_opt(r.means[1]),
            fmt_opt(r.means[2]),
            fmt_opt(r.means[3]),
            fmt_opt(r.means[4]),
            fmt_opt(r.means[5]),
            r.wins,
        )?;
    }
    Ok(())
}

/// Writes the per-metric statistics summary plus one CD-diagram data file
/// per metric; returns the created paths.
pub fn write_stats_report(
    dir: impl AsRef<Path>,
    config_hash: &str,
    report: &[MetricStats],
) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let mut created = Vec::new();

    let summary = dir.join("stats_summary.csv");
    let mut f = fs::File::create(&summary)?;
    writeln!(f, "# config_hash={config_hash}")?;
    writeln!(f, "metric,n_methods,chi2,ff,cd")?;
    for m in report {
        writeln!(
            f,
            "{},{},{},{},{}",
            m.metric,
            m.methods.len(),
            m.chi2,
            fmt_opt(m.ff),
            m.cd
        )?;
    }
    created.push(summary);

    for m in report {
        let path = dir.join(format!("cd_diagram_{}.csv", m.metric));
        let f = fs::File::create(&path)?;
        stats::write_cd_diagram(f, &m.methods, &m.avg_ranks, m.cd)?;
        created.push(path);
    }
    Ok(created)
}

/// Run metadata written next to each table. Wall-clock fields make this the
/// one output that is not byte-reproducible.
#[derive(Debug, Serialize)]
pub struct RunMetadata {
    pub command: String,
    pub config_hash: String,
    pub outputs: Vec<PathBuf>,
    pub wall_time_s: f64,
}

pub fn write_metadata(dir: impl AsRef<Path>, meta: &RunMetadata) -> Result<()> {
    let path = dir.as_ref().join(format!("{}_metadata.json", meta.command));
    let json = serde_json::to_string_pretty(meta).map_err(|e| Error::Config(e.to_string()))?;
    fs::write(path, json)?;
    Ok(())
}

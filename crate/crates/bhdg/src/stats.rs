//! Friedman test and Nemenyi post-hoc critical difference over
//! method-ranking tables.

use std::io::Write;

use ndarray::Array2;

use crate::error::{Error, Result};

/// Raw metric values for K methods over N datasets.
#[derive(Debug, Clone)]
pub struct RankTable {
    pub methods: Vec<String>,
    pub datasets: Vec<String>,
    /// N x K values.
    pub values: Array2<f64>,
    pub higher_is_better: bool,
}

impl RankTable {
    pub fn new(
        methods: Vec<String>,
        datasets: Vec<String>,
        values: Array2<f64>,
        higher_is_better: bool,
    ) -> Result<Self> {
        let (n, k) = values.dim();
        if methods.len() != k || datasets.len() != n {
            return Err(Error::Stats(format!(
                "table is {n}x{k} but {} datasets / {} methods were named",
                datasets.len(),
                methods.len()
            )));
        }
        if n == 0 || k < 2 {
            return Err(Error::Stats("need at least one dataset and two methods".into()));
        }
        Ok(RankTable {
            methods,
            datasets,
            values,
            higher_is_better,
        })
    }
}

/// Ranks one row: best value gets rank 1, ties share the mean rank.
fn rank_row(values: &[f64], higher_is_better: bool) -> Vec<f64> {
    let k = values.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        if higher_is_better {
            values[b].total_cmp(&values[a])
        } else {
            values[a].total_cmp(&values[b])
        }
    });
    let mut ranks = vec![0.0; k];
    let mut pos = 0;
    while pos < k {
        let mut end = pos + 1;
        while end < k && values[order[end]] == values[order[pos]] {
            end += 1;
        }
        // positions pos..end (0-based) share the mean of ranks pos+1..=end
        let mean = (pos + 1 + end) as f64 / 2.0;
        for &idx in &order[pos..end] {
            ranks[idx] = mean;
        }
        pos = end;
    }
    ranks
}

/// Per-method average rank (rank 1 = best on a dataset; ties share the mean
/// rank). Every row's ranks sum to K(K+1)/2.
pub fn average_ranks(table: &RankTable) -> Result<Vec<f64>> {
    if table.values.iter().any(|v| v.is_nan()) {
        return Err(Error::Stats("NaN value in rank table".into()));
    }
    let (n, k) = table.values.dim();
    let mut sums = vec![0.0; k];
    for row in table.values.rows() {
        let ranks = rank_row(row.as_slice().unwrap(), table.higher_is_better);
        for (s, r) in sums.iter_mut().zip(ranks) {
            *s += r;
        }
    }
    Ok(sums.into_iter().map(|s| s / n as f64).collect())
}

/// Friedman statistics from average ranks over `n_datasets` datasets:
/// the chi-square value and the F-distributed variant `F_F`.
pub fn friedman(avg_ranks: &[f64], n_datasets: usize) -> Result<(f64, f64)> {
    let k = avg_ranks.len();
    if k < 2 || n_datasets < 2 {
        return Err(Error::Stats(format!(
            "friedman needs K >= 2 methods and N >= 2 datasets (K={k}, N={n_datasets})"
        )));
    }
    let n = n_datasets as f64;
    let kf = k as f64;
    let sum_sq: f64 = avg_ranks.iter().map(|r| r * r).sum();
    let chi2 = 12.0 * n / (kf * (kf + 1.0)) * (sum_sq - kf * (kf + 1.0) * (kf + 1.0) / 4.0);
    let denom = n * (kf - 1.0) - chi2;
    if denom <= 0.0 {
        return Err(Error::Stats(format!(
            "degenerate Friedman denominator: chi2={chi2:.4} >= N(K-1)={:.4}",
            n * (kf - 1.0)
        )));
    }
    let ff = (n - 1.0) * chi2 / denom;
    Ok((chi2, ff))
}

/// Two-tailed Nemenyi critical values q_alpha at alpha = 0.05 for
/// K = 2..=20 groups (studentized range at infinite df divided by sqrt(2)).
const Q_ALPHA_05: [f64; 19] = [
    1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164, 3.219, 3.268, 3.313, 3.354,
    3.391, 3.426, 3.458, 3.489, 3.517, 3.544,
];

/// Nemenyi critical difference `CD = q_alpha * sqrt(K(K+1) / (6N))`.
/// Only `alpha = 0.05` is tabulated.
pub fn nemenyi_cd(k: usize, n_datasets: usize, alpha: f64) -> Result<f64> {
    if alpha != 0.05 {
        return Err(Error::Stats(format!(
            "only alpha = 0.05 is supported, got {alpha}"
        )));
    }
    if !(2..=20).contains(&k) {
        return Err(Error::Stats(format!(
            "critical values tabulated for K in 2..=20, got {k}"
        )));
    }
    if n_datasets == 0 {
        return Err(Error::Stats("need at least one dataset".into()));
    }
    let q = Q_ALPHA_05[k - 2];
    Ok(q * ((k * (k + 1)) as f64 / (6.0 * n_datasets as f64)).sqrt())
}

/// Writes CD-diagram data: one `method,avg_rank,cd` line per method.
pub fn write_cd_diagram<W: Write>(
    mut w: W,
    methods: &[String],
    avg_ranks: &[f64],
    cd: f64,
) -> std::io::Result<()> {
    writeln!(w, "method,avg_rank,cd")?;
    for (m, r) in methods.iter().zip(avg_ranks) {
        writeln!(w, "{m},{r},{cd}")?;
    }
    Ok(())
}

/// Bundled benchmark comparison data: published results of eleven feature
/// selectors on ten datasets, used by the statistics examples and as test
/// fixtures.
pub mod reference {
    use ndarray::Array2;

    pub const METHODS: [&str; 11] = [
        "RFS", "ls-l21", "RF-ML", "CSFS", "MSSL", "MDFS", "SSFS", "RGFS", "DRMFS", "MSFS", "BHDG",
    ];

    pub const DATASETS: [&str; 10] = [
        "Amphibians",
        "LangLog",
        "Enron",
        "reuters",
        "image",
        "Yeast",
        "Science",
        "Entertainment",
        "Corel5k",
        "Yelp",
    ];

    pub const METRICS: [&str; 6] = ["hl", "rl", "oe", "cv", "ap", "macro_f1"];

    /// Published average ranks per metric (rows follow [`METRICS`], columns
    /// follow [`METHODS`]), each row summing to 66 for K = 11.
    pub const AVERAGE_RANKS: [[f64; 11]; 6] = [
        [7.05, 5.4, 8.2, 8.1, 7.5, 4.85, 4.15, 6.75, 5.4, 7.6, 1.0],
        [6.0, 4.9, 7.7, 7.2, 8.7, 5.7, 4.85, 6.8, 6.15, 7.0, 1.0],
        [6.75, 6.05, 7.15, 6.85, 8.2, 6.1, 5.7, 6.0, 4.3, 7.3, 1.6],
        [5.9, 5.4, 7.95, 7.4, 8.15, 5.6, 5.4, 6.75, 6.05, 6.1, 1.3],
        [6.2, 4.7, 7.95, 7.7, 8.9, 5.7, 5.0, 6.65, 5.9, 6.3, 1.0],
        [6.95, 4.6, 7.4, 7.75, 7.8, 5.45, 5.15, 6.5, 5.2, 7.8, 1.4],
    ];

    /// Hamming-loss values (lower is better), 10 datasets x 11 methods.
    #[allow(clippy::approx_constant)] // benchmark data, not math constants
    pub fn hamming_loss_values() -> Array2<f64> {
        Array2::from_shape_vec(
            (10, 11),
            vec![
                0.3326, 0.3231, 0.3215, 0.3289, 0.3374, 0.3325, 0.3215, 0.3398, 0.3293, 0.3316,
                0.318, //
                0.0158, 0.0158, 0.0159, 0.0159, 0.0159, 0.0159, 0.0159, 0.0159, 0.0158, 0.0159,
                0.0157, //
                0.0547, 0.053, 0.0585, 0.0567, 0.0536, 0.0557, 0.052, 0.0522, 0.0536, 0.0559,
                0.0517, //
                0.123, 0.123, 0.108, 0.1233, 0.109, 0.122, 0.106, 0.118, 0.109, 0.1233,
                0.0999, //
                0.208, 0.203, 0.2148, 0.214, 0.212, 0.2017, 0.2061, 0.2028, 0.2061, 0.2086,
                0.1976, //
                0.2105, 0.2101, 0.2164, 0.2105, 0.2105, 0.2082, 0.2103, 0.2107, 0.2186, 0.2105,
                0.204, //
                0.0354, 0.0353, 0.0356, 0.0354, 0.0355, 0.0348, 0.0352, 0.0354, 0.0348, 0.0352,
                0.0344, //
                0.0605, 0.0643, 0.0638, 0.0649, 0.0637, 0.0652, 0.0665, 0.0653, 0.061, 0.0611,
                0.0603, //
                0.00941, 0.00943, 0.00945, 0.00945, 0.00946, 0.0095, 0.00943, 0.00943, 0.00945,
                0.00943, 0.0094, //
                0.1721, 0.1728, 0.1753, 0.1747, 0.1796, 0.1747, 0.1732, 0.1786, 0.171, 0.1759,
                0.1693,
            ],
        )
        .expect("static table shape")
    }
}

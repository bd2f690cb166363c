//! ML-KNN multi-label classifier.
//!
//! For each label, the model estimates a Bernoulli prior and the conditional
//! distribution of "number of positive neighbors" (0..=k), both with Laplace
//! smoothing. Prediction counts positive neighbors among the k nearest
//! training instances and compares the two posterior hypotheses.
//!
//! Neighbor search is brute-force Euclidean with deterministic tie-breaking
//! (equal distances go to the lower training index). Training uses
//! leave-self-out neighbors.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct MlKnn {
    pub k: usize,
    /// Laplace smoothing strength.
    pub s: f64,
    /// Per-label P(H1).
    pub priors: Array1<f64>,
    /// `cond_pos[[label, j]] = P(E_j | H1)` for j positive neighbors.
    pub cond_pos: Array2<f64>,
    /// `cond_neg[[label, j]] = P(E_j | H0)`.
    pub cond_neg: Array2<f64>,
    train_x: Array2<f64>,
    train_y: Array2<f64>,
}

fn sq_dist(a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

/// Indices of the k nearest rows of `train` to `query`, excluding
/// `exclude` (for leave-self-out), ties toward the lower index.
fn k_nearest(
    train: ArrayView2<'_, f64>,
    query: ArrayView1<'_, f64>,
    k: usize,
    exclude: Option<usize>,
) -> Vec<usize> {
    let mut cand: Vec<(f64, usize)> = (0..train.nrows())
        .filter(|&i| Some(i) != exclude)
        .map(|i| (sq_dist(train.row(i), query), i))
        .collect();
    cand.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    cand.truncate(k);
    cand.into_iter().map(|(_, i)| i).collect()
}

impl MlKnn {
    /// Estimates priors and neighbor-count conditionals from training data.
    pub fn train(x: &Array2<f64>, y: &Array2<f64>, k: usize, s: f64) -> Result<Self> {
        let n = x.nrows();
        let c = y.ncols();
        if y.nrows() != n {
            return Err(Error::Dim(format!(
                "X has {n} rows but Y has {}",
                y.nrows()
            )));
        }
        if k == 0 || n <= k {
            return Err(Error::Param(format!(
                "ML-KNN needs n_train > k (n_train={n}, k={k})"
            )));
        }
        #[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN
        if !(s > 0.0) {
            return Err(Error::Param(format!("smoothing must be positive, got {s}")));
        }

        let mut priors = Array1::<f64>::zeros(c);
        for label in 0..c {
            let positives: f64 = y.column(label).sum();
            priors[label] = (s + positives) / (2.0 * s + n as f64);
        }

        // neighbor positive-label counts per training instance
        let neighbor_counts: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                let nbrs = k_nearest(x.view(), x.row(i), k, Some(i));
                (0..c)
                    .map(|label| nbrs.iter().filter(|&&j| y[[j, label]] == 1.0).count())
                    .collect()
            })
            .collect();

        let mut cond_pos = Array2::<f64>::zeros((c, k + 1));
        let mut cond_neg = Array2::<f64>::zeros((c, k + 1));
        for label in 0..c {
            let mut count_pos = vec![0usize; k + 1];
            let mut count_neg = vec![0usize; k + 1];
            for i in 0..n {
                let j = neighbor_counts[i][label];
                if y[[i, label]] == 1.0 {
                    count_pos[j] += 1;
                } else {
                    count_neg[j] += 1;
                }
            }
            let total_pos: usize = count_pos.iter().sum();
            let total_neg: usize = count_neg.iter().sum();
            for j in 0..=k {
                cond_pos[[label, j]] =
                    (s + count_pos[j] as f64) / (s * (k as f64 + 1.0) + total_pos as f64);
                cond_neg[[label, j]] =
                    (s + count_neg[j] as f64) / (s * (k as f64 + 1.0) + total_neg as f64);
            }
        }

        Ok(MlKnn {
            k,
            s,
            priors,
            cond_pos,
            cond_neg,
            train_x: x.clone(),
            train_y: y.clone(),
        })
    }

    /// Hard 0/1 predictions plus posterior scores `P(H1 | E_j)` used for
    /// ranking. A posterior tie predicts 0.
    pub fn predict(&self, x_test: &Array2<f64>) -> Result<(Array2<f64>, Array2<f64>)> {
        if x_test.ncols() != self.train_x.ncols() {
            return Err(Error::Dim(format!(
                "test data has {} features, model was trained on {}",
                x_test.ncols(),
                self.train_x.ncols()
            )));
        }
        let n_test = x_test.nrows();
        let c = self.train_y.ncols();
        let mut hard = Array2::<f64>::zeros((n_test, c));
        let mut ranks = Array2::<f64>::zeros((n_test, c));
        for i in 0..n_test {
            let nbrs = k_nearest(self.train_x.view(), x_test.row(i), self.k, None);
            for label in 0..c {
                let j = nbrs
                    .iter()
                    .filter(|&&t| self.train_y[[t, label]] == 1.0)
                    .count();
                let mass_pos = self.priors[label] * self.cond_pos[[label, j]];
                let mass_neg = (1.0 - self.priors[label]) * self.cond_neg[[label, j]];
                hard[[i, label]] = if mass_pos > mass_neg { 1.0 } else { 0.0 };
                ranks[[i, label]] = mass_pos / (mass_pos + mass_neg);
            }
        }
        Ok((hard, ranks))
    }
}

//! Synthetic dataset generators for tests, examples and smoke runs.

use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::Result;

/// Planted-feature task: a small subset of features generates every label
/// through a sparse linear map, then each label bit flips with `label_noise`
/// probability. The remaining features are independent noise.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlantedConfig {
    pub n: usize,
    pub d: usize,
    pub c: usize,
    /// Number of informative features.
    pub informative: usize,
    /// Per-bit flip probability.
    pub label_noise: f64,
    pub seed: u64,
}

impl Default for PlantedConfig {
    fn default() -> Self {
        PlantedConfig {
            n: 300,
            d: 50,
            c: 6,
            informative: 5,
            label_noise: 0.1,
            seed: 0,
        }
    }
}

/// Generates the planted task; returns the dataset and the sorted indices of
/// the informative features.
///
/// The informative features carry cluster structure (instances sit near one
/// of several well-separated corners of the informative subspace) so that
/// instance similarity and label structure agree, which is the regime a
/// similarity-preserving selector is meant to exploit. Labels are sparse
/// positive linear thresholds of the informative features plus bit-flip
/// noise; the remaining features are independent uniform noise.
pub fn planted(cfg: &PlantedConfig) -> Result<(Dataset, Vec<usize>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut x = Array2::from_shape_fn((cfg.n, cfg.d), |_| rng.random::<f64>());

    // informative feature positions, drawn without replacement
    let mut pool: Vec<usize> = (0..cfg.d).collect();
    for i in (1..pool.len()).rev() {
        let j = (rand::RngCore::next_u64(&mut rng) % (i as u64 + 1)) as usize;
        pool.swap(i, j);
    }
    let mut informative: Vec<usize> = pool.into_iter().take(cfg.informative).collect();
    informative.sort_unstable();

    // cluster centroids at random corners of the informative subspace
    let n_clusters = 8.min(1 << cfg.informative.min(6));
    let centroids: Vec<Vec<f64>> = (0..n_clusters)
        .map(|_| {
            (0..cfg.informative)
                .map(|_| if rng.random_bool(0.5) { 0.85 } else { 0.15 })
                .collect()
        })
        .collect();
    for i in 0..cfg.n {
        let g = (rand::RngCore::next_u64(&mut rng) % n_clusters as u64) as usize;
        for (slot, &f) in informative.iter().enumerate() {
            let jitter = (rng.random::<f64>() - 0.5) * 0.6;
            x[[i, f]] = (centroids[g][slot] + jitter).clamp(0.0, 1.0);
        }
    }

    // each label thresholds a sparse positive combination of the informative
    // features at its median, then flips bits with the configured noise;
    // coefficients are positive because the selector's multiplicative
    // updates model nonnegative feature-label associations
    let mut y = Array2::<f64>::zeros((cfg.n, cfg.c));
    for label in 0..cfg.c {
        let weights: Vec<f64> = (0..cfg.informative)
            .map(|_| {
                if rng.random_bool(0.35) && cfg.informative > 2 {
                    0.0 // label ignores this informative feature
                } else {
                    0.2 + 0.8 * rng.random::<f64>()
                }
            })
            .collect();
        let scores = Array1::from_iter((0..cfg.n).map(|i| {
            informative
                .iter()
                .zip(&weights)
                .map(|(&f, &w)| w * x[[i, f]])
                .sum::<f64>()
        }));
        let mut sorted: Vec<f64> = scores.to_vec();
        sorted.sort_by(f64::total_cmp);
        let threshold = sorted[cfg.n / 2];
        for i in 0..cfg.n {
            let mut bit = scores[i] > threshold;
            if rng.random::<f64>() < cfg.label_noise {
                bit = !bit;
            }
            y[[i, label]] = bit as u8 as f64;
        }
    }

    let feature_names = (0..cfg.d).map(|j| format!("f{j}")).collect();
    let label_names = (0..cfg.c).map(|j| format!("label{j}")).collect();
    let ds = Dataset::new(
        format!("planted-{}", cfg.seed),
        x,
        y,
        feature_names,
        label_names,
    )?;
    Ok((ds, informative))
}

/// Trivially separable task: feature 0 alone determines every label.
pub fn single_feature(n: usize, d: usize, c: usize, seed: u64) -> Result<Dataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = Array2::from_shape_fn((n, d), |_| rng.random::<f64>());
    let y = Array2::from_shape_fn((n, c), |(i, _)| (x[[i, 0]] > 0.5) as u8 as f64);
    Dataset::new(
        format!("single-feature-{seed}"),
        x,
        y,
        (0..d).map(|j| format!("f{j}")).collect(),
        (0..c).map(|j| format!("label{j}")).collect(),
    )
}

/// Unstructured random task (uniform features, fair-coin labels).
pub fn random_dataset(n: usize, d: usize, c: usize, seed: u64) -> Result<Dataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = Array2::from_shape_fn((n, d), |_| rng.random::<f64>());
    let y = Array2::from_shape_fn((n, c), |_| if rng.random_bool(0.5) { 1.0 } else { 0.0 });
    Dataset::new(
        format!("random-{seed}"),
        x,
        y,
        (0..d).map(|j| format!("f{j}")).collect(),
        (0..c).map(|j| format!("label{j}")).collect(),
    )
}

//! Trivial feature-ranking baselines used for sanity checks.

use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::solver::FeatureRanking;

/// Random scores in [0, 1); a seeded shuffle of the feature order.
pub fn random_ranking(d: usize, seed: u64) -> FeatureRanking {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    FeatureRanking::from_scores(Array1::from_shape_fn(d, |_| rng.random::<f64>()))
}

/// Scores features by their population variance over the given rows.
pub fn variance_ranking(x: &Array2<f64>) -> FeatureRanking {
    let n = x.nrows() as f64;
    let scores = Array1::from_iter(x.columns().into_iter().map(|col| {
        let mean = col.sum() / n;
        col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n
    }));
    FeatureRanking::from_scores(scores)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn random_ranking_is_seeded() {
        let a = random_ranking(30, 7);
        let b = random_ranking(30, 7);
        assert_eq!(a.order, b.order);
        let c = random_ranking(30, 8);
        assert_ne!(a.order, c.order);
    }

    #[test]
    fn variance_ranking_prefers_spread_columns() {
        let x = array![[0.0, 5.0, 1.0], [10.0, 5.0, 1.2], [0.0, 5.0, 0.8]];
        let r = variance_ranking(&x);
        assert_eq!(r.order[0], 0); // widest column first
        assert_eq!(r.scores[1], 0.0); // constant column
    }
}

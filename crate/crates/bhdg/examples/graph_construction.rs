//! Similarity graphs and their Laplacians: Gaussian kNN over points on a
//! line, the cosine graph over binary codes, the quadratic-form identity,
//! and the coordinate-list debug dump.
//!
//! Run: cargo run --example graph_construction

use bhdg::graph::SimilarityGraph;
use ndarray::{array, Array1};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> bhdg::Result<()> {
    // three points on a line; with k = 1, the far point still joins the
    // pattern through OR-symmetrization
    let rows = array![[0.0], [1.0], [10.0]];
    let g = SimilarityGraph::gaussian_knn(rows.view(), 1, 1.0)?;
    println!("Gaussian kNN over points 0, 1, 10 (k=1, sigma=1):");
    println!("{:.4}", g.matrix().to_dense());

    let lap = g.laplacian();
    println!("degrees: {:.4}", lap.degrees());
    println!("Laplacian:\n{:.4}", lap.to_dense());

    // x^T L x equals the half pairwise sum — checked on a random vector
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let points = ndarray::Array2::from_shape_fn((12, 3), |_| rng.random::<f64>());
    let g = SimilarityGraph::gaussian_knn(points.view(), 4, 1.0)?;
    let lap = g.laplacian();
    let x = Array1::from_shape_fn(12, |_| rng.random::<f64>() * 2.0 - 1.0);
    let quad = lap.quad_form(x.view());
    let dense = g.matrix().to_dense();
    let mut pairwise = 0.0;
    for i in 0..12 {
        for j in 0..12 {
            let d = x[i] - x[j];
            pairwise += dense[[i, j]] * d * d;
        }
    }
    pairwise *= 0.5;
    println!("\nrandom 12-node graph: x^T L x = {quad:.6}, pairwise sum = {pairwise:.6}");

    // cosine graph over binary codes
    let codes = array![[1.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 1.0], [0.0, 0.0, 1.0]];
    let g = SimilarityGraph::cosine_knn(codes.view(), 2)?;
    println!("\ncosine kNN over 4 binary codes (k=2), coordinate list:");
    let mut buf = Vec::new();
    g.dump_coo(&mut buf)?;
    print!("{}", String::from_utf8(buf).unwrap());
    Ok(())
}

//! kNN similarity graphs and their Laplacians.
//!
//! Two kernels are supported: a Gaussian kernel over Euclidean distances and
//! cosine similarity (used for the dynamic graph over hash codes). Both build
//! an OR-symmetrized kNN pattern: an edge (i, j) exists when i is among j's k
//! nearest rows or vice versa. Ties are broken toward the lower index so
//! construction is deterministic.

use std::io::Write;

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Row-compressed sparse matrix. Graphs built here are symmetric with a zero
/// diagonal; the structural pattern keeps OR-kNN edges even when the kernel
/// value underflows to zero.
#[derive(Debug, Clone)]
pub struct SparseMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds from per-row `(col, value)` lists; each list must be sorted by
    /// column with no duplicates.
    fn from_rows(n: usize, rows: Vec<Vec<(usize, f64)>>) -> Self {
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for row in rows {
            for (j, v) in row {
                col_idx.push(j);
                values.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        SparseMatrix {
            n,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    /// Entries of row `i` as `(col, value)`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    /// All entries as `(row, col, value)`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i)
            .find(|&(col, _)| col == j)
            .map(|(_, v)| v)
            .unwrap_or(0.0)
    }

    /// `S * M` for a dense `M` (n x m).
    pub fn mul_dense(&self, m: &Array2<f64>) -> Array2<f64> {
        assert_eq!(m.nrows(), self.n, "sparse-dense product shape mismatch");
        let cols = m.ncols();
        let mut out = Array2::<f64>::zeros((self.n, cols));
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                for c in 0..cols {
                    out[[i, c]] += v * m[[j, c]];
                }
            }
        }
        out
    }

    /// Row sums (degree vector).
    pub fn degrees(&self) -> Array1<f64> {
        Array1::from_iter((0..self.n).map(|i| self.row(i).map(|(_, v)| v).sum()))
    }

    /// Squared Frobenius norm.
    pub fn frob_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    pub fn to_dense(&self) -> Array2<f64> {
        let mut out = Array2::<f64>::zeros((self.n, self.n));
        for (i, j, v) in self.iter() {
            out[[i, j]] = v;
        }
        out
    }
}

/// Kernel used for edge weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    Gaussian { sigma: f64 },
    Cosine,
}

/// Symmetric nonnegative kNN similarity matrix with zero diagonal.
#[derive(Debug, Clone)]
pub struct SimilarityGraph {
    s: SparseMatrix,
    k: usize,
    kernel: Kernel,
}

impl SimilarityGraph {
    /// Gaussian-kernel kNN graph: `S_ij = exp(-||r_i - r_j||^2 / sigma)` when
    /// i and j are OR-kNN neighbors under squared Euclidean distance.
    pub fn gaussian_knn(rows: ArrayView2<'_, f64>, k: usize, sigma: f64) -> Result<Self> {
        let m = rows.nrows();
        check_knn_params(m, k)?;
        if sigma <= 0.0 {
            return Err(Error::Param(format!("sigma must be positive, got {sigma}")));
        }
        let neighbors = select_neighbors(m, k, |i, j| {
            // more similar = smaller distance
            -sq_dist(rows.row(i), rows.row(j))
        });
        let s = symmetrize(m, &neighbors, |i, j| {
            (-sq_dist(rows.row(i), rows.row(j)) / sigma).exp()
        });
        Ok(SimilarityGraph {
            s,
            k,
            kernel: Kernel::Gaussian { sigma },
        })
    }

    /// Cosine-similarity kNN graph; neighbors are picked by descending cosine
    /// value. Rows with zero norm have similarity 0 to everything.
    pub fn cosine_knn(rows: ArrayView2<'_, f64>, k: usize) -> Result<Self> {
        let m = rows.nrows();
        check_knn_params(m, k)?;
        let norms: Vec<f64> = (0..m).map(|i| rows.row(i).dot(&rows.row(i)).sqrt()).collect();
        let cos = |i: usize, j: usize| -> f64 {
            if norms[i] == 0.0 || norms[j] == 0.0 {
                0.0
            } else {
                rows.row(i).dot(&rows.row(j)) / (norms[i] * norms[j])
            }
        };
        let neighbors = select_neighbors(m, k, cos);
        let s = symmetrize(m, &neighbors, cos);
        Ok(SimilarityGraph {
            s,
            k,
            kernel: Kernel::Cosine,
        })
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.s
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kernel(&self) -> Kernel {
        self.kernel
    }

    pub fn n(&self) -> usize {
        self.s.n()
    }

    /// Graph Laplacian `L = A - S` with `A_ii = sum_j S_ij`.
    pub fn laplacian(&self) -> Laplacian {
        laplacian(self)
    }

    /// Writes the matrix as coordinate-list text, one `i j value` per line.
    pub fn dump_coo<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for (i, j, v) in self.s.iter() {
            writeln!(w, "{i} {j} {v}")?;
        }
        Ok(())
    }
}

/// Graph Laplacian `L = A - S` stored as the similarity part plus the degree
/// diagonal, so callers can use `S`, `A` and `L` without re-deriving them.
#[derive(Debug, Clone)]
pub struct Laplacian {
    s: SparseMatrix,
    degrees: Array1<f64>,
}

/// Builds the Laplacian of a similarity graph.
pub fn laplacian(g: &SimilarityGraph) -> Laplacian {
    let degrees = g.s.degrees();
    Laplacian {
        s: g.s.clone(),
        degrees,
    }
}

impl Laplacian {
    pub fn n(&self) -> usize {
        self.s.n()
    }

    /// The similarity part `S`.
    pub fn similarity(&self) -> &SparseMatrix {
        &self.s
    }

    /// The degree diagonal `A_ii`.
    pub fn degrees(&self) -> &Array1<f64> {
        &self.degrees
    }

    /// `L * M = A M - S M` for dense `M`.
    pub fn apply(&self, m: &Array2<f64>) -> Array2<f64> {
        let mut out = crate::linalg::scale_rows(m, &self.degrees);
        out -= &self.s.mul_dense(m);
        out
    }

    /// Quadratic form `x^T L x`.
    pub fn quad_form(&self, x: ArrayView1<'_, f64>) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.s.n() {
            acc += self.degrees[i] * x[i] * x[i];
            for (j, v) in self.s.row(i) {
                acc -= v * x[i] * x[j];
            }
        }
        acc
    }

    /// `tr(M^T L M)`, i.e. the quadratic form summed over columns of `M`.
    pub fn quad_form_cols(&self, m: &Array2<f64>) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.s.n() {
            let ri = m.row(i);
            acc += self.degrees[i] * ri.dot(&ri);
            for (j, v) in self.s.row(i) {
                acc -= v * ri.dot(&m.row(j));
            }
        }
        acc
    }

    pub fn to_dense(&self) -> Array2<f64> {
        let mut out = self.s.to_dense();
        out.mapv_inplace(|v| -v);
        for i in 0..self.s.n() {
            out[[i, i]] += self.degrees[i];
        }
        out
    }
}

fn check_knn_params(m: usize, k: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::Param(format!("need at least 2 rows, got {m}")));
    }
    if k == 0 || k >= m {
        return Err(Error::Param(format!(
            "neighbor count k={k} must satisfy 1 <= k <= m-1 (m={m})"
        )));
    }
    Ok(())
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

/// Per-row top-k neighbor indices by descending `score`, self excluded,
/// ties broken toward the lower index.
fn select_neighbors<F>(m: usize, k: usize, score: F) -> Vec<Vec<usize>>
where
    F: Fn(usize, usize) -> f64 + Sync,
{
    (0..m)
        .into_par_iter()
        .map(|i| {
            let mut cand: Vec<(f64, usize)> = (0..m)
                .filter(|&j| j != i)
                .map(|j| (score(i, j), j))
                .collect();
            cand.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
            cand.truncate(k);
            cand.into_iter().map(|(_, j)| j).collect()
        })
        .collect()
}

/// OR-symmetrization: keeps an edge whenever either endpoint selected the
/// other, with the kernel value computed once per undirected pair.
fn symmetrize<F>(m: usize, neighbors: &[Vec<usize>], weight: F) -> SparseMatrix
where
    F: Fn(usize, usize) -> f64,
{
    let mut pattern: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (i, nbrs) in neighbors.iter().enumerate() {
        for &j in nbrs {
            pattern[i].push(j);
            pattern[j].push(i);
        }
    }
    let mut rows = Vec::with_capacity(m);
    for (i, mut cols) in pattern.into_iter().enumerate() {
        cols.sort_unstable();
        cols.dedup();
        rows.push(
            cols.into_iter()
                .map(|j| {
                    let (a, b) = if i <= j { (i, j) } else { (j, i) };
                    (j, weight(a, b))
                })
                .collect(),
        );
    }
    SparseMatrix::from_rows(m, rows)
}

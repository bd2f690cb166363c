//! Small dense linear-algebra helpers: an SPD Cholesky solve used by the
//! discrete hash-code updates, plus a couple of row-wise conveniences.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};

/// Cholesky factor (lower triangular) of a symmetric positive-definite matrix.
fn cholesky(g: &Array2<f64>) -> Result<Array2<f64>> {
    let n = g.nrows();
    if g.ncols() != n {
        return Err(Error::Dim(format!(
            "cholesky expects a square matrix, got {}x{}",
            n,
            g.ncols()
        )));
    }
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::LinearSolve("non-finite entries in system matrix".into()));
    }
    let mut l = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in 0..=i {
            let mut sum = g[[i, j]];
            for k in 0..j {
                sum -= l[[i, k]] * l[[j, k]];
            }
            if i == j {
                if sum <= 0.0 {
                    return Err(Error::LinearSolve(format!(
                        "matrix not positive definite (pivot {sum:.3e} at {i})"
                    )));
                }
                l[[i, j]] = sum.sqrt();
            } else {
                l[[i, j]] = sum / l[[j, j]];
            }
        }
    }
    Ok(l)
}

/// Solves `X * G = C` for `X` (i.e. computes `C * G^{-1}`) with `G` symmetric
/// positive definite, via Cholesky. `C` is `m x n`, `G` is `n x n`.
pub fn solve_right_spd(c: &Array2<f64>, g: &Array2<f64>) -> Result<Array2<f64>> {
    let (m, n) = c.dim();
    if g.nrows() != n {
        return Err(Error::Dim(format!(
            "solve_right_spd: C is {m}x{n} but G is {}x{}",
            g.nrows(),
            g.ncols()
        )));
    }
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::LinearSolve("non-finite entries in right-hand side".into()));
    }
    let l = cholesky(g)?;
    // X G = C  <=>  G X^T = C^T (G symmetric); solve L L^T x = rhs per row of C.
    let mut x = Array2::<f64>::zeros((m, n));
    let mut y = vec![0.0; n];
    for row in 0..m {
        // forward: L y = c_row
        for i in 0..n {
            let mut sum = c[[row, i]];
            for k in 0..i {
                sum -= l[[i, k]] * y[k];
            }
            y[i] = sum / l[[i, i]];
        }
        // backward: L^T x = y
        for i in (0..n).rev() {
            let mut sum = y[i];
            for k in (i + 1)..n {
                sum -= l[[k, i]] * x[[row, k]];
            }
            x[[row, i]] = sum / l[[i, i]];
        }
    }
    Ok(x)
}

/// Scales each row `i` of `m` by `factors[i]`.
pub fn scale_rows(m: &Array2<f64>, factors: &Array1<f64>) -> Array2<f64> {
    let mut out = m.clone();
    for (mut row, &f) in out.rows_mut().into_iter().zip(factors.iter()) {
        row.mapv_inplace(|v| v * f);
    }
    out
}

/// Euclidean norm of each row.
pub fn row_norms(m: &Array2<f64>) -> Array1<f64> {
    Array1::from_iter(m.rows().into_iter().map(|r| r.dot(&r).sqrt()))
}

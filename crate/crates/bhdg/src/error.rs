//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A file could not be parsed; `line` is 1-based where known.
    #[error("parse error in {path} (line {line}): {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    /// The parsed content is structurally inconsistent (e.g. a label listed
    /// in the XML is missing from the data file).
    #[error("schema error: {0}")]
    Schema(String),

    /// Data violates a domain invariant (non-binary label, NaN feature, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// An argument is outside its admissible range.
    #[error("parameter error: {0}")]
    Param(String),

    /// Matrix dimensions do not line up.
    #[error("dimension mismatch: {0}")]
    Dim(String),

    /// The solver produced a non-finite objective.
    #[error(
        "solver diverged at iteration {iter}: terms = \
         [regression={:.6e}, hashing={:.6e}, row_sparsity={:.6e}, \
         dynamic_graph={:.6e}, label_graph={:.6e}, inner_product={:.6e}]",
        terms[0], terms[1], terms[2], terms[3], terms[4], terms[5]
    )]
    Diverged { iter: usize, terms: [f64; 6] },

    /// A linear system could not be solved (non-finite or non-SPD input).
    #[error("linear solve failed: {0}")]
    LinearSolve(String),

    /// The experiment configuration is invalid.
    #[error("config error: {0}")]
    Config(String),

    #[error("statistics error: {0}")]
    Stats(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

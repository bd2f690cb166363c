//! Multi-label feature selection with binary hash-code pseudo-labels and a
//! dynamic graph constraint, plus the evaluation stack needed to benchmark
//! it: an ML-KNN classifier, six multi-label metrics, and Friedman/Nemenyi
//! rank statistics.
//!
//! The crate is organized around the experiment pipeline:
//!
//! - [`dataset`]: ARFF/XML and CSV loading, deterministic splits, scaling.
//! - [`graph`]: kNN similarity graphs (Gaussian, cosine) and Laplacians.
//! - [`solver`]: the feature-selection objective and its block-coordinate
//!   optimization, including the two ablation variants.
//! - [`baseline`]: random and variance rankings for sanity checks.
//! - [`mlknn`]: the classifier used to score selected feature subsets.
//! - [`metrics`]: hamming loss, ranking loss, one-error, coverage, average
//!   precision and macro-F1.
//! - [`stats`]: Friedman test and Nemenyi critical difference.
//! - [`experiment`]: configuration, single cells, sweeps, sensitivity grids,
//!   ablations and report generation.
//!
//! Runnable walkthroughs for each capability live in `examples/`; the `bhdg`
//! binary exposes the same pipelines as subcommands.

pub mod baseline;
pub mod dataset;
pub mod error;
pub mod experiment;
pub mod graph;
mod linalg;
pub mod metrics;
pub mod mlknn;
pub mod solver;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};

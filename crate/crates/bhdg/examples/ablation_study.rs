//! Ablation comparison: the full model against the no-dynamic-graph and
//! relaxed-binariness variants, averaged over several seeds.
//!
//! Run: cargo run --release --example ablation_study

use bhdg::experiment::{run_ablation, DatasetSpec, ExperimentConfig, SweepConfig};
use bhdg::solver::{HyperParams, Variant};
use bhdg::synth::PlantedConfig;

fn main() -> bhdg::Result<()> {
    let cfg = ExperimentConfig {
        datasets: vec![DatasetSpec::Planted {
            name: "planted".into(),
            cfg: PlantedConfig {
                n: 300,
                d: 50,
                c: 6,
                informative: 5,
                label_noise: 0.1,
                seed: 0,
            },
        }],
        hyperparams: HyperParams {
            lambda1: 10.0,
            lambda2: 0.25,
            lambda3: 0.01,
            hash_coupling: 16.0,
            sigma: 5.0,
            rho0: 0.05,
            code_length: Some(4),
            max_iter: 150,
            tol: 1e-9,
            ..HyperParams::default()
        },
        sweep: SweepConfig {
            variants: vec![Variant::Bhdg],
            seeds: (1..=5).collect(),
            fractions: None,
            counts: None,
        },
        ..ExperimentConfig::default()
    };

    let rows = run_ablation(&cfg)?;
    println!(
        "{:<10} {:<8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>9} {:>5}",
        "dataset", "variant", "hl", "rl", "oe", "cv", "ap", "macro_f1", "wins"
    );
    for r in &rows {
        let fmt = |v: Option<f64>| v.map(|x| format!("{x:.4}")).unwrap_or_else(|| "-".into());
        println!(
            "{:<10} {:<8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>9} {:>5}",
            r.dataset,
            r.variant.name(),
            fmt(r.means[0]),
            fmt(r.means[1]),
            fmt(r.means[2]),
            fmt(r.means[3]),
            fmt(r.means[4]),
            fmt(r.means[5]),
            r.wins
        );
    }
    println!("\nwins = number of the six metrics on which the variant is best for the dataset");
    Ok(())
}

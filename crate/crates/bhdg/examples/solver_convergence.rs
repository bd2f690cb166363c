//! Objective trace of one solver run: the six terms, the ALM feasibility gap
//! and the penalty, iteration by iteration, plus the CSV export.
//!
//! Run: cargo run --release --example solver_convergence

use bhdg::dataset::{make_split, MinMaxScaler};
use bhdg::solver::{fit, write_trace_csv, HyperParams, Variant};
use bhdg::synth::{planted, PlantedConfig};

fn main() -> bhdg::Result<()> {
    let cfg = PlantedConfig {
        n: 200,
        d: 50,
        c: 8,
        informative: 5,
        label_noise: 0.1,
        seed: 11,
    };
    let (ds, _) = planted(&cfg)?;
    let split = make_split(ds.n_instances(), 0.5, 511)?;
    let (x_raw, y) = ds.subset(&split.train_indices);
    let x = MinMaxScaler::fit(&x_raw).transform(&x_raw);

    let hp = HyperParams {
        lambda1: 10.0,
        lambda2: 0.1,
        lambda3: 3.0,
        max_iter: 30,
        tol: 1e-3,
        seed: 11,
        ..HyperParams::default()
    };
    let (_, state) = fit(&x, &y, &hp, Variant::Bhdg)?;

    println!(
        "{:>4} {:>12} {:>9} {:>9} {:>8} {:>8} {:>9} {:>11} {:>7} {:>6}",
        "iter", "objective", "regr", "hash", "l21", "dyn", "label", "inner", "|B-Z|", "rho"
    );
    for r in &state.trace {
        let t = r.terms;
        println!(
            "{:>4} {:>12.3} {:>9.3} {:>9.3} {:>8.3} {:>8.3} {:>9.3} {:>11.3} {:>7.2} {:>6.3}",
            r.iter,
            r.objective,
            t.regression,
            t.hashing,
            t.row_sparsity,
            t.dynamic_graph,
            t.label_graph,
            t.inner_product,
            r.bz_gap,
            r.rho
        );
    }

    let trace = state.objective_trace();
    if trace.len() < hp.max_iter {
        println!(
            "\nconverged after {} iterations (relative change < {:.0e})",
            trace.len(),
            hp.tol
        );
    } else {
        println!("\nstopped at the iteration cap ({})", hp.max_iter);
    }

    let path = std::env::temp_dir().join("bhdg_trace.csv");
    write_trace_csv(&state.trace, std::fs::File::create(&path)?)?;
    println!("trace CSV written to {}", path.display());
    Ok(())
}

//! Friedman test and Nemenyi critical difference over the bundled benchmark
//! comparison tables (eleven selectors, ten datasets, six metrics).
//!
//! Run: cargo run --example ranking_statistics

use bhdg::stats::{average_ranks, friedman, nemenyi_cd, reference, write_cd_diagram, RankTable};

fn main() -> bhdg::Result<()> {
    let k = reference::METHODS.len();
    let n = reference::DATASETS.len();

    // rank the raw hamming-loss table (lower is better)
    let table = RankTable::new(
        reference::METHODS.iter().map(|s| s.to_string()).collect(),
        reference::DATASETS.iter().map(|s| s.to_string()).collect(),
        reference::hamming_loss_values(),
        false,
    )?;
    let ranks = average_ranks(&table)?;
    println!("average ranks from the raw hamming-loss cells (1 = best):");
    for (m, r) in reference::METHODS.iter().zip(&ranks) {
        println!("  {m:<8} {r:.2}");
    }
    println!("  (ranks sum to {:.1} = K(K+1)/2)\n", ranks.iter().sum::<f64>());

    // Friedman statistic per metric from the published average-rank rows
    println!("Friedman F_F per metric (K = {k}, N = {n}):");
    for (metric, row) in reference::METRICS.iter().zip(reference::AVERAGE_RANKS.iter()) {
        let (chi2, ff) = friedman(row, n)?;
        println!("  {metric:<9} chi2 = {chi2:7.3}  F_F = {ff:.3}");
    }

    let cd = nemenyi_cd(k, n, 0.05)?;
    println!("\nNemenyi critical difference at alpha = 0.05: {cd:.3}");
    println!("methods whose average ranks differ by more than the CD differ significantly");

    let path = std::env::temp_dir().join("bhdg_cd_diagram_hl.csv");
    let methods: Vec<String> = reference::METHODS.iter().map(|s| s.to_string()).collect();
    write_cd_diagram(std::fs::File::create(&path)?, &methods, &ranks, cd)?;
    println!("CD-diagram data written to {}", path.display());
    Ok(())
}

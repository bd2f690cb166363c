//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (visible with `--nocapture`; the test outcome itself is
//! the machine-readable verdict).
//!
//! The heavy, wall-clock-capped criteria are serialized through a mutex so
//! their runtime limits are not distorted by parallel test execution.

use std::sync::Mutex;
use std::time::Instant;

use ndarray::{Array1, Array2, ArrayView1};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bhdg::baseline;
use bhdg::dataset::{load_arff, make_split, MinMaxScaler};
use bhdg::experiment::{run_cell, MlKnnConfig, Selector};
use bhdg::graph::SimilarityGraph;
use bhdg::metrics::evaluate;
use bhdg::mlknn::MlKnn;
use bhdg::solver::{
    fit, select_top, update_b, update_d, update_multiplier, update_p, update_w, update_z,
    FeatureCount, HyperParams, SolverState, Variant,
};
use bhdg::stats::{friedman, nemenyi_cd, reference};
use bhdg::synth::{planted, PlantedConfig};

static HEAVY: Mutex<()> = Mutex::new(());

fn uniform(rng: &mut ChaCha8Rng, shape: (usize, usize)) -> Array2<f64> {
    Array2::from_shape_fn(shape, |_| rng.random::<f64>())
}

fn bernoulli(rng: &mut ChaCha8Rng, shape: (usize, usize), p: f64) -> Array2<f64> {
    Array2::from_shape_fn(shape, |_| if rng.random_bool(p) { 1.0 } else { 0.0 })
}

#[test]
fn criterion_01_friedman_reproduction() {
    let started = Instant::now();
    let expected = [6.514, 5.328, 3.609, 4.016, 5.874, 4.643];
    for ((metric, row), want) in reference::METRICS
        .iter()
        .zip(reference::AVERAGE_RANKS.iter())
        .zip(expected)
    {
        let (_, ff) = friedman(row, 10).unwrap();
        assert!(
            (ff - want).abs() <= 0.01,
            "{metric}: F_F = {ff:.4}, expected {want} +- 0.01"
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}, cap is 1 s");
    println!("criterion 01 PASS: all six published F_F statistics reproduced within +-0.01 ({elapsed:?})");
}

#[test]
fn criterion_02_nemenyi_cd_reproduction() {
    let cd = nemenyi_cd(11, 10, 0.05).unwrap();
    assert!((cd - 4.774).abs() <= 0.005, "CD = {cd:.4}, expected 4.774 +- 0.005");
    println!("criterion 02 PASS: nemenyi_cd(11, 10, 0.05) = {cd:.4} (target 4.774 +- 0.005)");
}

#[test]
fn criterion_03_block_monotonicity() {
    let _gate = HEAVY.lock().unwrap();
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..20 {
        let n = rng.random_range(12..=60);
        let d = rng.random_range(3..=40);
        let c = rng.random_range(2..=10);
        let x = uniform(&mut rng, (n, d));
        let y = bernoulli(&mut rng, (n, c), 0.5);
        let hp = HyperParams {
            lambda1: 1.0,
            lambda2: 0.5,
            lambda3: 0.5,
            k: 5.min(n - 1),
            seed: case,
            ..HyperParams::default()
        };
        let mut state = SolverState::init(&x, &y, &hp, Variant::Bhdg).unwrap();
        let hp = state.hp.clone();

        // W-subobjective with B, L_B and D frozen
        let w_sub = |state: &SolverState| -> f64 {
            let xw = x.dot(&state.w);
            let fit_term: f64 = (&xw - &state.b).iter().map(|v| v * v).sum();
            let graph = hp.lambda2 * state.b_graph.quad_form_cols(&xw);
            let reweighted: f64 = hp.lambda1
                * state
                    .w
                    .rows()
                    .into_iter()
                    .zip(state.d_diag.iter())
                    .map(|(r, &dii)| dii * r.dot(&r))
                    .sum::<f64>();
            fit_term + graph + reweighted
        };
        let mut prev = w_sub(&state);
        for step in 0..20 {
            state.w = update_w(&state, &x, &hp);
            let cur = w_sub(&state);
            assert!(
                cur <= prev * (1.0 + 1e-9),
                "case {case} step {step}: W-subobjective rose {prev:.6e} -> {cur:.6e}"
            );
            prev = cur;
        }

        let p_sub = |state: &SolverState| -> f64 {
            (&y.dot(&state.p) - &state.b).iter().map(|v| v * v).sum()
        };
        let mut prev = p_sub(&state);
        for step in 0..20 {
            state.p = update_p(&state, &y, &hp);
            let cur = p_sub(&state);
            assert!(
                cur <= prev * (1.0 + 1e-9),
                "case {case} step {step}: P-subobjective rose {prev:.6e} -> {cur:.6e}"
            );
            prev = cur;
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}, cap is 10 s");
    println!("criterion 03 PASS: 20x20 W- and P-updates non-increasing within 1e-9 relative ({elapsed:?})");
}

#[test]
fn criterion_04_binary_and_nonnegativity_invariants() {
    let _gate = HEAVY.lock().unwrap();
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..10 {
        let n = rng.random_range(20..=50);
        let d = rng.random_range(4..=20);
        let c = rng.random_range(2..=8);
        let x = uniform(&mut rng, (n, d));
        let y = bernoulli(&mut rng, (n, c), 0.4);
        let hp = HyperParams {
            lambda1: 0.5,
            lambda2: 0.2,
            lambda3: 0.5,
            k: 5.min(n - 1),
            max_iter: 20,
            tol: 1e-12,
            seed: case,
            ..HyperParams::default()
        };
        // manual loop in the documented update order, checking after every
        // iteration (fit() only exposes the final state)
        let mut state = SolverState::init(&x, &y, &hp, Variant::Bhdg).unwrap();
        let hp = state.hp.clone();
        for iter in 1..=hp.max_iter {
            state.d_diag = update_d(&state.w, hp.epsilon);
            state.w = update_w(&state, &x, &hp);
            state.p = update_p(&state, &y, &hp);
            state.b = update_b(&state, &x, &y, &hp).unwrap();
            state.z = update_z(&state, &hp).unwrap();
            let (m, rho) = update_multiplier(&state, &hp);
            state.m = m;
            state.rho = rho;
            state.b_graph = SimilarityGraph::cosine_knn(state.b.view(), hp.k)
                .unwrap()
                .laplacian();
            assert!(
                state.b.iter().all(|&v| v == 0.0 || v == 1.0),
                "case {case} iter {iter}: B left {{0,1}}"
            );
            assert!(
                state.z.iter().all(|&v| v == 0.0 || v == 1.0),
                "case {case} iter {iter}: Z left {{0,1}}"
            );
            assert!(
                state.w.iter().all(|&v| v >= 0.0),
                "case {case} iter {iter}: W went negative"
            );
            assert!(
                state.p.iter().all(|&v| v >= 0.0),
                "case {case} iter {iter}: P went negative"
            );
            assert!(
                state.d_diag.iter().all(|&v| v > 0.0),
                "case {case} iter {iter}: D_ii not positive"
            );
        }
        // the packaged loop must agree on the final invariants as well
        let (_, final_state) = fit(&x, &y, &hp, Variant::Bhdg).unwrap();
        assert!(final_state.b.iter().all(|&v| v == 0.0 || v == 1.0));
        assert!(final_state.w.iter().all(|&v| v >= 0.0));
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}, cap is 30 s");
    println!("criterion 04 PASS: binariness and nonnegativity held on every iteration of 10 runs ({elapsed:?})");
}

#[test]
fn criterion_05_convergence_behavior() {
    let _gate = HEAVY.lock().unwrap();
    let started = Instant::now();
    let mut converged = 0;
    let mut iterations = Vec::new();
    for seed in 0..20u64 {
        let cfg = PlantedConfig {
            n: 200,
            d: 50,
            c: 8,
            informative: 5,
            label_noise: 0.1,
            seed,
        };
        let (ds, _) = planted(&cfg).unwrap();
        let split = make_split(ds.n_instances(), 0.5, 500 + seed).unwrap();
        let (x_raw, y) = ds.subset(&split.train_indices);
        let x = MinMaxScaler::fit(&x_raw).transform(&x_raw);
        let hp = HyperParams {
            lambda1: 10.0,
            lambda2: 0.1,
            lambda3: 3.0,
            max_iter: 30,
            tol: 1e-3,
            seed,
            ..HyperParams::default()
        };
        let (_, state) = fit(&x, &y, &hp, Variant::Bhdg).unwrap();
        let trace = state.objective_trace();
        let ok = trace.len() < hp.max_iter || {
            let last = trace[trace.len() - 1];
            let prev = trace[trace.len() - 2];
            (last - prev).abs() / prev.max(1e-12) < 1e-3
        };
        if ok {
            converged += 1;
        }
        iterations.push(trace.len());
    }
    assert!(
        converged >= 18,
        "only {converged}/20 seeds reached relative change < 1e-3 within 30 iterations ({iterations:?})"
    );
    let elapsed = started.elapsed();
    println!(
        "criterion 05 PASS: {converged}/20 seeds stabilized within 30 iterations (iterations used: {iterations:?}, {elapsed:?})"
    );
}

/// Independent quadratic-time ML-KNN reference used by criterion 6.
mod naive_mlknn {
    use ndarray::{Array2, ArrayView1};

    fn dist(a: ArrayView1<f64>, b: ArrayView1<f64>) -> f64 {
        let mut acc = 0.0;
        for (p, q) in a.iter().zip(b.iter()) {
            acc += (p - q) * (p - q);
        }
        acc
    }

    pub fn train_predict(
        x: &Array2<f64>,
        y: &Array2<f64>,
        x_test: &Array2<f64>,
        k: usize,
        s: f64,
    ) -> (Array2<f64>, Array2<f64>) {
        let n = x.nrows();
        let c = y.ncols();
        let neighbors = |query: ArrayView1<f64>, exclude: Option<usize>| -> Vec<usize> {
            let mut all: Vec<usize> = (0..n).filter(|&i| Some(i) != exclude).collect();
            all.sort_by(|&a, &b| {
                dist(x.row(a), query)
                    .total_cmp(&dist(x.row(b), query))
                    .then(a.cmp(&b))
            });
            all.truncate(k);
            all
        };
        let mut hard = Array2::<f64>::zeros((x_test.nrows(), c));
        let mut ranks = Array2::<f64>::zeros((x_test.nrows(), c));
        for label in 0..c {
            let positives = y.column(label).iter().filter(|&&v| v == 1.0).count();
            let prior = (s + positives as f64) / (2.0 * s + n as f64);
            let mut count_pos = vec![0usize; k + 1];
            let mut count_neg = vec![0usize; k + 1];
            for i in 0..n {
                let nbrs = neighbors(x.row(i), Some(i));
                let j = nbrs.iter().filter(|&&t| y[[t, label]] == 1.0).count();
                if y[[i, label]] == 1.0 {
                    count_pos[j] += 1;
                } else {
                    count_neg[j] += 1;
                }
            }
            for (row, test) in x_test.rows().into_iter().enumerate() {
                let nbrs = neighbors(test, None);
                let j = nbrs.iter().filter(|&&t| y[[t, label]] == 1.0).count();
                let p_pos = (s + count_pos[j] as f64)
                    / (s * (k as f64 + 1.0) + count_pos.iter().sum::<usize>() as f64);
                let p_neg = (s + count_neg[j] as f64)
                    / (s * (k as f64 + 1.0) + count_neg.iter().sum::<usize>() as f64);
                let mass_pos = prior * p_pos;
                let mass_neg = (1.0 - prior) * p_neg;
                hard[[row, label]] = if mass_pos > mass_neg { 1.0 } else { 0.0 };
                ranks[[row, label]] = mass_pos / (mass_pos + mass_neg);
            }
        }
        (hard, ranks)
    }
}

#[test]
fn criterion_06_oracle_equivalence() {
    // 6a: ML-KNN vs the naive quadratic reference, exact, 200 fuzz cases
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    for case in 0..200 {
        let n = rng.random_range(4..=20);
        let d = rng.random_range(1..=4);
        let c = rng.random_range(1..=4);
        let k = rng.random_range(1..n.min(7));
        let x = uniform(&mut rng, (n, d));
        let y = bernoulli(&mut rng, (n, c), 0.5);
        let x_test = uniform(&mut rng, (3, d));
        let model = MlKnn::train(&x, &y, k, 1.0).unwrap();
        let (hard, ranks) = model.predict(&x_test).unwrap();
        let (hard_ref, ranks_ref) = naive_mlknn::train_predict(&x, &y, &x_test, k, 1.0);
        assert_eq!(hard, hard_ref, "case {case}: hard predictions differ");
        assert_eq!(ranks, ranks_ref, "case {case}: posterior scores differ");
    }

    // 6b: the fixed 3x4 hand-computed example
    let y_true = ndarray::array![
        [1.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [1.0, 1.0, 0.0, 1.0]
    ];
    let ranks = ndarray::array![
        [0.9, 0.8, 0.1, 0.4],
        [0.3, 0.3, 0.5, 0.2],
        [0.6, 0.7, 0.8, 0.1]
    ];
    let hard = ndarray::array![
        [1.0, 1.0, 0.0, 0.0],
        [0.0, 1.0, 1.0, 0.0],
        [1.0, 1.0, 1.0, 0.0]
    ];
    let report = evaluate(&hard, &ranks, &y_true).unwrap();
    let close = |a: f64, b: f64| (a - b).abs() < 1e-12;
    assert!(close(report.hamming_loss, 5.0 / 12.0));
    assert!(close(report.ranking_loss, 13.0 / 18.0));
    assert!(close(report.one_error, 2.0 / 3.0));
    assert!(close(report.coverage, 8.0 / 3.0));
    assert!(close(report.average_precision, 31.0 / 54.0));
    assert!(close(report.macro_f1, 0.45));

    // 6c: ranking loss vs pairwise enumeration, 100 fuzz cases
    for _ in 0..100 {
        let n = rng.random_range(1..6);
        let c = rng.random_range(2..7);
        let y = bernoulli(&mut rng, (n, c), 0.5);
        let hard = Array2::<f64>::zeros((n, c));
        let scores = Array2::from_shape_fn((n, c), |_| (rng.random::<f64>() * 4.0).round());
        let report = evaluate(&hard, &scores, &y).unwrap();
        let mut total = 0.0;
        let mut counted = 0usize;
        for i in 0..n {
            let pos: Vec<usize> = (0..c).filter(|&l| y[[i, l]] == 1.0).collect();
            let neg: Vec<usize> = (0..c).filter(|&l| y[[i, l]] == 0.0).collect();
            if pos.is_empty() || neg.is_empty() {
                continue;
            }
            let mut bad = 0usize;
            for &p in &pos {
                for &q in &neg {
                    if scores[[i, q]] >= scores[[i, p]] {
                        bad += 1;
                    }
                }
            }
            total += bad as f64 / (pos.len() * neg.len()) as f64;
            counted += 1;
        }
        let expected = if counted > 0 { total / counted as f64 } else { 0.0 };
        assert_eq!(report.ranking_loss, expected);
    }
    println!("criterion 06 PASS: ML-KNN exact on 200 cases; metrics match the hand oracle and RL enumeration");
}

#[test]
fn criterion_07_graph_identities() {
    fn check(graph: &SimilarityGraph, x: ArrayView1<f64>) {
        let n = graph.n();
        let lap = graph.laplacian();
        let lhs = lap.quad_form(x);
        let dense = graph.matrix().to_dense();
        let mut rhs = 0.0;
        for i in 0..n {
            for j in 0..n {
                let d = x[i] - x[j];
                rhs += dense[[i, j]] * d * d;
            }
        }
        rhs *= 0.5;
        let denom = lhs.abs().max(rhs.abs()).max(1e-30);
        assert!(
            (lhs - rhs).abs() / denom <= 1e-8 || (lhs - rhs).abs() < 1e-12,
            "quadratic form mismatch: {lhs} vs {rhs}"
        );
        let ldense = lap.to_dense();
        for i in 0..n {
            let row_sum: f64 = ldense.row(i).sum();
            assert!(row_sum.abs() <= 1e-10, "Laplacian row {i} sums to {row_sum}");
            for j in 0..n {
                assert_eq!(dense[[i, j]], dense[[j, i]], "similarity not symmetric");
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for case in 0..100 {
        let n = rng.random_range(5..30);
        let r = rng.random_range(1..6);
        let k = rng.random_range(1..n.min(8));
        let rows = uniform(&mut rng, (n, r));
        let graph = if case % 2 == 0 {
            SimilarityGraph::gaussian_knn(rows.view(), k, 0.5 + rng.random::<f64>()).unwrap()
        } else {
            SimilarityGraph::cosine_knn(rows.view(), k).unwrap()
        };
        let x = Array1::from_shape_fn(n, |_| rng.random::<f64>() * 2.0 - 1.0);
        check(&graph, x.view());
    }
    println!("criterion 07 PASS: quadratic-form identity, zero row sums and symmetry on 100 random graphs");
}

/// Operating point for the planted-recovery gate.
fn recovery_hp(seed: u64) -> HyperParams {
    HyperParams {
        lambda1: 10.0,
        lambda2: 0.1,
        lambda3: 0.01,
        hash_coupling: 16.0,
        sigma: 1.0,
        rho0: 0.05,
        alpha: 1.0,
        max_iter: 150,
        tol: 1e-9,
        seed,
        ..HyperParams::default()
    }
}

#[test]
fn criterion_08_planted_selection_quality() {
    let _gate = HEAVY.lock().unwrap();
    let started = Instant::now();
    let mut hit4 = 0;
    let mut ap_wins = 0;
    let mut f1_wins = 0;
    let mlknn_cfg = MlKnnConfig::default();
    for seed in 0..20u64 {
        let cfg = PlantedConfig {
            n: 300,
            d: 50,
            c: 6,
            informative: 5,
            label_noise: 0.1,
            seed,
        };
        let (ds, informative) = planted(&cfg).unwrap();
        let split = make_split(ds.n_instances(), 0.5, 1000 + seed).unwrap();
        let hp = recovery_hp(seed);

        // planted recovery in the top 10%
        let (x_raw, y_train) = ds.subset(&split.train_indices);
        let x_train = MinMaxScaler::fit(&x_raw).transform(&x_raw);
        let (ranking, _) = fit(&x_train, &y_train, &hp, Variant::Bhdg).unwrap();
        let top = select_top(&ranking, FeatureCount::Fraction(0.1)).unwrap();
        let hits = top.iter().filter(|f| informative.contains(f)).count();
        if hits >= 4 {
            hit4 += 1;
        }

        // pipeline comparison against the random baseline
        let spec = FeatureCount::Fraction(0.1);
        let bhdg_row = run_cell(&ds, &split, &hp, Selector::Bhdg(Variant::Bhdg), spec, &mlknn_cfg)
            .unwrap()
            .row;
        let random_row = run_cell(&ds, &split, &hp, Selector::Random, spec, &mlknn_cfg)
            .unwrap()
            .row;
        if bhdg_row.ap > random_row.ap {
            ap_wins += 1;
        }
        if bhdg_row.macro_f1 > random_row.macro_f1 {
            f1_wins += 1;
        }
    }
    let elapsed = started.elapsed();
    assert!(
        hit4 >= 16,
        "top-10% selection held >= 4 of 5 planted features on only {hit4}/20 seeds"
    );
    assert!(ap_wins >= 18, "AP beat the random baseline on only {ap_wins}/20 seeds");
    assert!(
        f1_wins >= 18,
        "Macro-F1 beat the random baseline on only {f1_wins}/20 seeds"
    );
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}, cap is 2 min");
    println!(
        "criterion 08 PASS: recovery {hit4}/20, AP wins {ap_wins}/20, Macro-F1 wins {f1_wins}/20 ({elapsed:?})"
    );
}

#[test]
fn criterion_09_ablation_ordering() {
    let _gate = HEAVY.lock().unwrap();
    let started = Instant::now();
    let mlknn_cfg = MlKnnConfig::default();
    let mut mean_ap = [0.0f64; 3]; // bhdg, bhdg2, bhdg1
    for seed in 0..20u64 {
        let cfg = PlantedConfig {
            n: 300,
            d: 50,
            c: 6,
            informative: 5,
            label_noise: 0.1,
            seed,
        };
        let (ds, _) = planted(&cfg).unwrap();
        let split = make_split(ds.n_instances(), 0.5, 1000 + seed).unwrap();
        let hp = HyperParams {
            lambda1: 10.0,
            lambda2: 0.25,
            lambda3: 0.01,
            hash_coupling: 16.0,
            sigma: 5.0,
            rho0: 0.05,
            alpha: 1.0,
            code_length: Some(4),
            max_iter: 150,
            tol: 1e-9,
            seed,
            ..HyperParams::default()
        };
        let spec = FeatureCount::Fraction(0.1);
        for (slot, variant) in [Variant::Bhdg, Variant::Bhdg2, Variant::Bhdg1]
            .into_iter()
            .enumerate()
        {
            let row = run_cell(&ds, &split, &hp, Selector::Bhdg(variant), spec, &mlknn_cfg)
                .unwrap()
                .row;
            mean_ap[slot] += row.ap.expect("ok cell") / 20.0;
        }
    }
    let [ap_full, ap_relaxed, ap_nograph] = mean_ap;
    let band = -0.005;
    assert!(
        ap_full - ap_relaxed >= band,
        "AP(full) - AP(relaxed) = {:.4} breaches the non-inferiority band",
        ap_full - ap_relaxed
    );
    assert!(
        ap_relaxed - ap_nograph >= band,
        "AP(relaxed) - AP(no dynamic graph) = {:.4} breaches the non-inferiority band",
        ap_relaxed - ap_nograph
    );
    let elapsed = started.elapsed();
    println!(
        "criterion 09 PASS: mean AP full={ap_full:.4} >= relaxed={ap_relaxed:.4} >= no-graph={ap_nograph:.4} (band -0.005, {elapsed:?})"
    );
}

#[test]
fn criterion_10_public_dataset_smoke_check() {
    // Exact published per-dataset cell values are NOT reproducible here: the
    // original splits, seeds and preprocessing are unpublished. This soft
    // check runs only when the public Yeast dataset is supplied.
    let arff = std::env::var("BHDG_YEAST_ARFF").ok();
    let xml = std::env::var("BHDG_YEAST_XML").ok();
    let (arff, xml) = match (arff, xml) {
        (Some(a), Some(x)) => (a, x),
        _ => {
            println!(
                "criterion 10 SKIP (soft check): set BHDG_YEAST_ARFF and BHDG_YEAST_XML to run \
                 the Yeast smoke test; published table cells are not bit-reproducible either way"
            );
            return;
        }
    };
    let _gate = HEAVY.lock().unwrap();
    let ds = load_arff(&arff, &xml).unwrap();
    assert_eq!(
        (ds.n_instances(), ds.n_features(), ds.n_labels()),
        (2417, 103, 14),
        "unexpected Yeast shape"
    );
    let split = make_split(ds.n_instances(), 0.5, 42).unwrap();
    let hp = recovery_hp(42);
    let row = run_cell(
        &ds,
        &split,
        &hp,
        Selector::Bhdg(Variant::Bhdg),
        FeatureCount::Fraction(0.2),
        &MlKnnConfig::default(),
    )
    .unwrap()
    .row;
    let hl = row.hl.expect("smoke run must complete");
    assert!(
        (0.18..=0.26).contains(&hl),
        "Yeast smoke HL = {hl:.4} outside the sanity band [0.18, 0.26]"
    );
    println!("criterion 10 PASS (soft): Yeast 20% smoke run completed with HL = {hl:.4}");
}

#[test]
fn baseline_sanity_variance_ranking() {
    // supporting check: the variance baseline is wired up and deterministic
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let x = uniform(&mut rng, (30, 8));
    let a = baseline::variance_ranking(&x);
    let b = baseline::variance_ranking(&x);
    assert_eq!(a.order, b.order);
}

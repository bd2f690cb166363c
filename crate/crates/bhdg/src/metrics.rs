//! The six multi-label evaluation metrics.
//!
//! Conventions:
//! - Ranking-based metrics (RL, OE, CV, AP) order labels per instance by
//!   descending score, ties broken toward the lower label index. RL itself
//!   works on raw scores and counts a tie between a positive and a negative
//!   as a violation.
//! - Instances without positive labels are skipped for RL, OE, CV and AP
//!   (RL additionally requires at least one negative); they still count for
//!   HL and Macro-F1.
//! - Coverage is 0-based and unnormalized: the mean, over instances, of the
//!   deepest rank position occupied by a true positive.
//! - Macro-F1 scores a label with no true and no predicted positives as 1;
//!   otherwise 0/0 counts as 0.

use ndarray::Array2;

use crate::error::{Error, Result};

/// The six evaluation values for one (selector, dataset, feature-count) cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricReport {
    pub hamming_loss: f64,
    pub ranking_loss: f64,
    pub one_error: f64,
    pub coverage: f64,
    pub average_precision: f64,
    pub macro_f1: f64,
}

impl MetricReport {
    /// `(name, value, higher_is_better)` triples in the canonical order.
    pub fn named(&self) -> [(&'static str, f64, bool); 6] {
        [
            ("hl", self.hamming_loss, false),
            ("rl", self.ranking_loss, false),
            ("oe", self.one_error, false),
            ("cv", self.coverage, false),
            ("ap", self.average_precision, true),
            ("macro_f1", self.macro_f1, true),
        ]
    }
}

/// Label indices ordered by descending score, ties toward the lower index.
fn rank_order(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order
}

/// Computes all six metrics from hard predictions, ranking scores and the
/// ground truth. All three matrices are n_test x c; `hard` and `y_true` are
/// 0/1 valued.
pub fn evaluate(
    hard: &Array2<f64>,
    ranks: &Array2<f64>,
    y_true: &Array2<f64>,
) -> Result<MetricReport> {
    let (n, c) = y_true.dim();
    if hard.dim() != (n, c) || ranks.dim() != (n, c) {
        return Err(Error::Dim(format!(
            "metric inputs disagree: hard {:?}, ranks {:?}, truth {:?}",
            hard.dim(),
            ranks.dim(),
            y_true.dim()
        )));
    }
    if n == 0 || c == 0 {
        return Err(Error::Validation("empty prediction matrices".into()));
    }
    if ranks.iter().any(|v| !v.is_finite()) {
        return Err(Error::Validation("non-finite ranking score".into()));
    }

    let truth = |i: usize, l: usize| y_true[[i, l]] > 0.5;
    let predicted = |i: usize, l: usize| hard[[i, l]] > 0.5;

    // Hamming loss: disagreement fraction over the whole matrix.
    let mut disagreements = 0usize;
    for i in 0..n {
        for l in 0..c {
            if truth(i, l) != predicted(i, l) {
                disagreements += 1;
            }
        }
    }
    let hamming_loss = disagreements as f64 / (n * c) as f64;

    let mut rl_sum = 0.0;
    let mut rl_count = 0usize;
    let mut oe_errors = 0usize;
    let mut oe_count = 0usize;
    let mut cv_sum = 0.0;
    let mut ap_sum = 0.0;
    let mut ranked_count = 0usize;

    for i in 0..n {
        let positives: Vec<usize> = (0..c).filter(|&l| truth(i, l)).collect();
        let negatives: Vec<usize> = (0..c).filter(|&l| !truth(i, l)).collect();
        if positives.is_empty() {
            continue;
        }

        if !negatives.is_empty() {
            let mut violations = 0usize;
            for &p in &positives {
                for &q in &negatives {
                    if ranks[[i, q]] >= ranks[[i, p]] {
                        violations += 1;
                    }
                }
            }
            rl_sum += violations as f64 / (positives.len() * negatives.len()) as f64;
            rl_count += 1;
        }

        let row: Vec<f64> = ranks.row(i).to_vec();
        let order = rank_order(&row);
        oe_count += 1;
        if !truth(i, order[0]) {
            oe_errors += 1;
        }
        let mut position = vec![0usize; c];
        for (pos, &label) in order.iter().enumerate() {
            position[label] = pos;
        }
        let deepest = positives.iter().map(|&p| position[p]).max().unwrap();
        cv_sum += deepest as f64;

        // average precision over the instance's positives
        let mut ap_inst = 0.0;
        for &p in &positives {
            let pos_p = position[p];
            let at_or_above = positives.iter().filter(|&&q| position[q] <= pos_p).count();
            ap_inst += at_or_above as f64 / (pos_p + 1) as f64;
        }
        ap_sum += ap_inst / positives.len() as f64;
        ranked_count += 1;
    }

    let ranking_loss = if rl_count > 0 { rl_sum / rl_count as f64 } else { 0.0 };
    let one_error = if oe_count > 0 {
        oe_errors as f64 / oe_count as f64
    } else {
        0.0
    };
    let coverage = if ranked_count > 0 {
        cv_sum / ranked_count as f64
    } else {
        0.0
    };
    let average_precision = if ranked_count > 0 {
        ap_sum / ranked_count as f64
    } else {
        1.0
    };

    // Macro-F1 over labels.
    let mut f1_sum = 0.0;
    for l in 0..c {
        let mut tp = 0usize;
        let mut fp = 0usize;
        let mut fn_ = 0usize;
        for i in 0..n {
            match (predicted(i, l), truth(i, l)) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, true) => fn_ += 1,
                (false, false) => {}
            }
        }
        f1_sum += if tp + fp + fn_ == 0 {
            1.0 // no true and no predicted positives: exact match
        } else {
            2.0 * tp as f64 / (2 * tp + fp + fn_) as f64
        };
    }
    let macro_f1 = f1_sum / c as f64;

    Ok(MetricReport {
        hamming_loss,
        ranking_loss,
        one_error,
        coverage,
        average_precision,
        macro_f1,
    })
}

//! Evaluation of labels and scores against ground truth.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::frame::{LabelVector, ScoreVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl Confusion {
    pub fn count(truth: &[u8], pred: &[u8]) -> Result<Self> {
        if truth.len() != pred.len() {
            return Err(CoreError::LengthMismatch(truth.len(), pred.len()));
        }
        let mut c = Confusion::default();
        for (&t, &p) in truth.iter().zip(pred) {
            match (t, p) {
                (1, 1) => c.tp += 1,
                (0, 1) => c.fp += 1,
                (1, 0) => c.fn_ += 1,
                _ => c.tn += 1,
            }
        }
        Ok(c)
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }
}

/// The six quantities reported after a detection run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// `None` when the truth vector holds a single class.
    pub roc_auc: Option<f64>,
    pub processing_seconds: f64,
}

/// Scores predictions and outlier scores against `truth`.
///
/// Zero denominators yield 0 for precision, recall and f1. `elapsed` is the
/// caller's wall-clock measurement; nothing is timed here.
pub fn output_performance(
    truth: &LabelVector,
    pred: &LabelVector,
    scores: &ScoreVector,
    elapsed: f64,
) -> Result<EvalReport> {
    if truth.len() != scores.len() {
        return Err(CoreError::LengthMismatch(truth.len(), scores.len()));
    }
    let c = Confusion::count(truth, pred)?;
    let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    let precision = ratio(c.tp, c.tp + c.fp);
    let recall = ratio(c.tp, c.tp + c.fn_);
    let f1 = if precision + recall == 0.0 { 0.0 } else { 2.0 * precision * recall / (precision + recall) };
    Ok(EvalReport {
        accuracy: ratio(c.tp + c.tn, c.total()),
        precision,
        recall,
        f1,
        roc_auc: roc_auc(truth, scores).ok(),
        processing_seconds: elapsed.max(0.0),
    })
}

/// Area under the ROC curve via the Mann-Whitney rank statistic,
/// `(R+ - P(P+1)/2) / (P N)` with midranks for tied scores.
pub fn roc_auc(truth: &[u8], scores: &[f64]) -> Result<f64> {
    if truth.len() != scores.len() {
        return Err(CoreError::LengthMismatch(truth.len(), scores.len()));
    }
    let positives = truth.iter().filter(|&&t| t == 1).count();
    let negatives = truth.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(CoreError::SingleClass);
    }
    let ranks = midranks(scores);
    let rank_sum: f64 = ranks.iter().zip(truth).filter(|(_, &t)| t == 1).map(|(r, _)| r).sum();
    let p = positives as f64;
    Ok((rank_sum - p * (p + 1.0) / 2.0) / (p * negatives as f64))
}

/// 1-based ranks, ties sharing the mean of the ranks they span.
fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // positions i..=j hold ranks i+1..=j+1
        let mid = (i + j + 2) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = mid;
        }
        i = j + 1;
    }
    ranks
}

use serde::{Deserialize, Serialize};

use super::train::Sample;
use super::HarnessError;
use crate::model::{forward, ModelParams, Mode, DECISION_THRESHOLD};
use crate::rules::{Labels, N_RULES};

/// Counts with label `1` (correct pronunciation) as the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl Confusion {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn record(&mut self, predicted: u8, actual: u8) {
        match (predicted, actual) {
            (1, 1) => self.tp += 1,
            (1, _) => self.fp += 1,
            (_, 1) => self.fn_ += 1,
            _ => self.tn += 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RuleMetrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub confusion: Confusion,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl RuleMetrics {
    pub fn from_confusion(c: Confusion) -> Self {
        let precision = ratio(c.tp, c.tp + c.fp);
        let recall = ratio(c.tp, c.tp + c.fn_);
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        Self {
            accuracy: ratio(c.tp + c.tn, c.total()),
            precision,
            recall,
            f1,
            confusion: c,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// Indexed in [`crate::Rule::ALL`] order.
    pub per_rule: [RuleMetrics; N_RULES],
    pub n: usize,
}

pub fn compute_metrics(predicted: &[Labels], truth: &[Labels]) -> Result<Metrics, HarnessError> {
    if truth.is_empty() {
        return Err(HarnessError::EmptyTestSet);
    }
    if predicted.len() != truth.len() {
        return Err(HarnessError::CountMismatch(predicted.len(), truth.len()));
    }
    let mut counts = [Confusion::default(); N_RULES];
    for (p, t) in predicted.iter().zip(truth) {
        for r in 0..N_RULES {
            counts[r].record(p[r], t[r]);
        }
    }
    Ok(Metrics {
        per_rule: counts.map(RuleMetrics::from_confusion),
        n: truth.len(),
    })
}

/// Thresholds each head at 0.5 over already-normalized samples.
pub fn evaluate(params: &ModelParams, test: &[Sample]) -> Result<Metrics, HarnessError> {
    if test.is_empty() {
        return Err(HarnessError::EmptyTestSet);
    }
    let mut predicted = Vec::with_capacity(test.len());
    for s in test {
        let mut rng = rand::rngs::mock::StepRng::new(0, 0);
        let (probs, _) = forward(&s.features, params, Mode::Infer, &mut rng)?;
        predicted.push(std::array::from_fn(|r| u8::from(probs[r] >= DECISION_THRESHOLD)));
    }
    let truth: Vec<Labels> = test.iter().map(|s| s.labels).collect();
    compute_metrics(&predicted, &truth)
}

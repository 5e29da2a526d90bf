use serde::{Deserialize, Serialize};

use super::FeatureSequence;
use crate::Matrix;

pub const STD_FLOOR: f64 = 1e-8;

/// Per-coefficient mean and standard deviation from the training split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormStats {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl NormStats {
    /// Zero mean, unit std: applying it changes nothing.
    pub fn identity(dim: usize) -> Self {
        Self {
            mean: vec![0.0; dim],
            std: vec![1.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    /// Pooled statistics over every frame of every matrix. Returns `None` when
    /// there are no frames or the widths disagree.
    pub fn fit<'a>(mats: impl IntoIterator<Item = &'a Matrix>) -> Option<Self> {
        let mats: Vec<&Matrix> = mats.into_iter().collect();
        let dim = mats.first()?.cols();
        if mats.iter().any(|m| m.cols() != dim) {
            return None;
        }
        let count: usize = mats.iter().map(|m| m.rows()).sum();
        if count == 0 {
            return None;
        }
        let n = count as f64;
        let mut mean = vec![0.0; dim];
        for row in mats.iter().flat_map(|m| m.iter_rows()) {
            for (s, x) in mean.iter_mut().zip(row) {
                *s += x;
            }
        }
        mean.iter_mut().for_each(|s| *s /= n);
        let mut var = vec![0.0; dim];
        for row in mats.iter().flat_map(|m| m.iter_rows()) {
            for ((v, x), mu) in var.iter_mut().zip(row).zip(&mean) {
                *v += (x - mu) * (x - mu);
            }
        }
        let std = var.into_iter().map(|v| (v / n).sqrt().max(STD_FLOOR)).collect();
        Some(Self { mean, std })
    }

    /// `(x - μ) / σ` per column.
    pub fn apply(&self, m: &Matrix) -> Matrix {
        debug_assert_eq!(m.cols(), self.dim());
        let mut out = m.clone();
        for t in 0..out.rows() {
            for ((x, mu), sd) in out.row_mut(t).iter_mut().zip(&self.mean).zip(&self.std) {
                *x = (*x - mu) / sd;
            }
        }
        out
    }
}

/// Fits statistics on the training sequences and returns them with the
/// normalized copies. Panics on an empty slice or mismatched widths.
pub fn normalize_features(train: &[FeatureSequence]) -> (NormStats, Vec<FeatureSequence>) {
    let stats = NormStats::fit(train.iter().map(|s| &s.coeffs))
        .expect("normalize_features needs at least one frame of consistent width");
    let normalized = train
        .iter()
        .map(|s| FeatureSequence {
            coeffs: stats.apply(&s.coeffs),
            ..s.clone()
        })
        .collect();
    (stats, normalized)
}

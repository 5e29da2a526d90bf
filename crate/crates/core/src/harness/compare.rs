use serde::{Deserialize, Serialize};

use super::{compute_metrics, HarnessError, Metrics, Sample};
use crate::baselines::{knn_classify, logreg_train, pool_matrix, PooledVector, Standardizer, DEFAULT_K};
use crate::rules::Labels;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BaselineConfig {
    pub k: usize,
    pub logreg_epochs: usize,
    pub logreg_lr: f64,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        Self {
            k: DEFAULT_K,
            logreg_epochs: 500,
            logreg_lr: 0.1,
        }
    }
}

/// k-NN and logistic-regression metrics on one shared split.
///
/// Sequences are mean/std pooled, then standardized with train-split statistics.
pub fn evaluate_baselines(
    train: &[Sample],
    test: &[Sample],
    config: &BaselineConfig,
) -> Result<(Metrics, Metrics), HarnessError> {
    if train.is_empty() {
        return Err(HarnessError::EmptyTrainingSet);
    }
    if test.is_empty() {
        return Err(HarnessError::EmptyTestSet);
    }
    let pooled_train: Vec<PooledVector> = train.iter().map(|s| pool_matrix(&s.features)).collect();
    let refs: Vec<&PooledVector> = pooled_train.iter().collect();
    let standardizer = Standardizer::fit(&refs).ok_or(HarnessError::EmptyTrainingSet)?;
    let train_xy: Vec<(PooledVector, Labels)> = pooled_train
        .iter()
        .zip(train)
        .map(|(v, s)| (standardizer.apply(v), s.labels))
        .collect();
    let test_x: Vec<PooledVector> = test
        .iter()
        .map(|s| standardizer.apply(&pool_matrix(&s.features)))
        .collect();
    let truth: Vec<Labels> = test.iter().map(|s| s.labels).collect();

    let k = config.k.min(train_xy.len());
    let knn_preds = test_x
        .iter()
        .map(|q| knn_classify(q, &train_xy, k))
        .collect::<Result<Vec<_>, _>>()?;
    let logreg = logreg_train(&train_xy, config.logreg_epochs, config.logreg_lr)?;
    let logreg_preds: Vec<Labels> = test_x.iter().map(|q| logreg.predict(q)).collect();

    Ok((compute_metrics(&knn_preds, &truth)?, compute_metrics(&logreg_preds, &truth)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Matrix;

    fn sample(v: f64, y: u8) -> Sample {
        Sample {
            id: String::new(),
            features: Matrix::from_vec(2, 2, vec![v, -v, v + 0.1, -v]),
            labels: [y, y, 1 - y],
        }
    }

    #[test]
    fn separable_data_is_learned_by_both() {
        let train: Vec<Sample> = (0..12).map(|i| sample(if i % 2 == 0 { 1.0 + i as f64 * 0.01 } else { -1.0 }, (i % 2 == 0) as u8)).collect();
        let test = vec![sample(1.05, 1), sample(-0.95, 0)];
        let (knn, lr) = evaluate_baselines(&train, &test, &BaselineConfig::default()).unwrap();
        for m in [knn, lr] {
            assert!(m.per_rule.iter().all(|r| r.accuracy == 1.0));
        }
    }
}

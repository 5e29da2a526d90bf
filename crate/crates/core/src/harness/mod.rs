//! Experiment plumbing: stratified splitting, the training loop, per-rule
//! metrics, accuracy curves and the model comparison report.

mod compare;
mod curves;
mod metrics;
mod report;
mod split;
mod train;

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use compare::{evaluate_baselines, BaselineConfig};
pub use curves::{emit_curves, read_curves, write_curves, CurvePoint, CURVE_HEADER};
pub use metrics::{compute_metrics, evaluate, Confusion, Metrics, RuleMetrics};
pub use report::{compare_report, render_report, PublishedRow, ReportMeta, PUBLISHED_ROWS, PUBLISHED_LSTM};
pub use split::{split_dataset, split_indices};
pub use train::{fit_normalization, train, train_with_observer, Sample, TrainConfig, TrainOutcome};

use crate::baselines::BaselineError;
use crate::model::ModelError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("dataset has {0} examples; at least 10 are needed to split")]
    TooSmall(usize),
    #[error("bad training configuration: {0}")]
    BadConfig(String),
    #[error("test set is empty")]
    EmptyTestSet,
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("{0} predictions for {1} examples")]
    CountMismatch(usize, usize),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Baseline(#[from] BaselineError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse curve file line {line}: {detail}")]
    BadCurveFile { line: usize, detail: String },
}

/// Short SHA-256 digest of a configuration's canonical JSON form.
///
/// Object keys are sorted before hashing, so field order never matters.
pub fn config_hash<T: Serialize>(config: &T) -> String {
    // serde_json's default map is ordered by key
    let value = serde_json::to_value(config).expect("configurations serialize to JSON");
    let canonical = serde_json::to_vec(&value).expect("JSON values serialize");
    let digest = Sha256::digest(&canonical);
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_ignores_key_order() {
        let a: serde_json::Value = serde_json::from_str(r#"{"b": 1, "a": [1, 2], "c": {"y": 1, "x": 2}}"#).unwrap();
        let b: serde_json::Value = serde_json::from_str(r#"{"c": {"x": 2, "y": 1}, "a": [1, 2], "b": 1}"#).unwrap();
        assert_eq!(config_hash(&a), config_hash(&b));
        assert_eq!(config_hash(&a).len(), 16);
        let c: serde_json::Value = serde_json::from_str(r#"{"b": 2, "a": [1, 2], "c": {"y": 1, "x": 2}}"#).unwrap();
        assert_ne!(config_hash(&a), config_hash(&c));
    }
}

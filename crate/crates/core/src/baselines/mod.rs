//! Classical comparison classifiers over fixed-length pooled MFCC vectors.
//!
//! Variable-length sequences are reduced to per-coefficient mean and standard
//! deviation, then fed to k-nearest-neighbours or per-rule logistic regression.

mod knn;
mod logreg;
mod pool;

use thiserror::Error;

pub use knn::{knn_classify, DEFAULT_K};
pub use logreg::{logreg_loss_and_grad, logreg_train, LogRegModel, Standardizer};
pub use pool::{pool_features, pool_matrix, PooledVector};

#[derive(Debug, Error, PartialEq)]
pub enum BaselineError {
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("k = {k} must be between 1 and the training set size {n}")]
    BadK { k: usize, n: usize },
    #[error("vector length {actual} does not match {expected}")]
    DimensionMismatch { expected: usize, actual: usize },
}

//! Stacked-LSTM sequence classifier with a ReLU dense stack and one sigmoid
//! head per rule.
//!
//! Gradients come from exact backpropagation through time; training uses
//! RMSprop with global-norm gradient clipping. Everything is computed in f64.

mod config;
mod io;
mod loss;
mod lstm;
mod network;
mod optim;
mod params;

use thiserror::Error;

pub use config::ModelConfig;
pub use io::{load_model, read_model, save_model, write_model, MODEL_FORMAT_VERSION};
pub use loss::{bce_loss, bce_grad, PROB_CLAMP};
pub use lstm::{lstm_cell_backward, lstm_cell_forward, CellCache, CellGrads};
pub use network::{backward, forward, predict, DenseCache, ForwardCache, Mode};
pub use optim::{
    clip_global_norm, global_norm, rmsprop_step, rmsprop_update, OptimizerState, RmsPropConfig,
    DEFAULT_CLIP_NORM,
};
pub use params::{
    init_params, DenseParams, GateParams, HeadParams, LstmLayerParams, ModelParams, Weights,
};

/// Probability at or above which a head's verdict is "correct".
pub const DECISION_THRESHOLD: f64 = 0.5;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid model configuration: {0}")]
    BadConfig(String),
    #[error("dimension mismatch in {what}: expected {expected}, got {actual}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("length mismatch: {0} probabilities vs {1} labels")]
    LengthMismatch(usize, usize),
    #[error("stale forward cache: {0}")]
    StaleCache(&'static str),
    #[error("parameter shapes disagree: {0}")]
    ShapeMismatch(String),
    #[error("model file i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("model file version {found} is not the supported version {expected}")]
    VersionMismatch { found: u16, expected: u16 },
    #[error("corrupt model file: {0}")]
    CorruptFile(String),
}

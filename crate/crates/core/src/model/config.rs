use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::N_RULES;

/// Architecture hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelConfig {
    pub input_dim: usize,
    pub lstm_units: Vec<usize>,
    pub dense_units: Vec<usize>,
    /// Applied after every dense layer except the last.
    pub dropout_rate: f64,
    pub n_heads: usize,
    pub seed: u64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            input_dim: 13,
            lstm_units: vec![256, 256, 256],
            dense_units: vec![16, 16, 8],
            dropout_rate: 0.2,
            n_heads: N_RULES,
            seed: 0,
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |m: &str| Err(ModelError::BadConfig(m.to_string()));
        if self.input_dim == 0 || self.n_heads == 0 {
            return bad("input_dim and n_heads must be at least 1");
        }
        if self.lstm_units.is_empty() || self.lstm_units.contains(&0) {
            return bad("need at least one LSTM layer, every layer with at least one unit");
        }
        if self.dense_units.is_empty() || self.dense_units.contains(&0) {
            return bad("need at least one dense layer, every layer with at least one unit");
        }
        if !(0.0..1.0).contains(&self.dropout_rate) {
            return bad("dropout_rate must be in [0, 1)");
        }
        Ok(())
    }

    /// Width of the vector the heads read.
    pub fn head_input_dim(&self) -> usize {
        *self.dense_units.last().expect("validated config has dense layers")
    }

    pub fn trunk_output_dim(&self) -> usize {
        *self.lstm_units.last().expect("validated config has LSTM layers")
    }
}

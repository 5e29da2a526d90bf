use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ModelConfig, ModelError};
use crate::features::{MfccConfig, NormStats};
use crate::Matrix;

/// Input weights `W`, recurrent weights `U` and bias `b` of one LSTM gate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateParams {
    pub w: Matrix,
    pub u: Matrix,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LstmLayerParams {
    pub input: GateParams,
    pub forget: GateParams,
    pub output: GateParams,
    /// Candidate cell update (the `tanh` gate).
    pub cell: GateParams,
}

impl LstmLayerParams {
    pub fn units(&self) -> usize {
        self.input.b.len()
    }

    pub fn input_dim(&self) -> usize {
        self.input.w.cols()
    }

    /// Gates in `i, f, o, g` order.
    pub fn gates(&self) -> [&GateParams; 4] {
        [&self.input, &self.forget, &self.output, &self.cell]
    }

    pub fn gates_mut(&mut self) -> [&mut GateParams; 4] {
        [&mut self.input, &mut self.forget, &mut self.output, &mut self.cell]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseParams {
    /// `out × in`.
    pub w: Matrix,
    pub b: Vec<f64>,
}

/// One row of weights and one bias per head.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeadParams {
    pub w: Matrix,
    pub b: Vec<f64>,
}

/// Every trainable tensor. Gradients and optimizer accumulators share this shape.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights {
    pub lstm_layers: Vec<LstmLayerParams>,
    pub dense_layers: Vec<DenseParams>,
    pub heads: HeadParams,
}

impl Weights {
    /// All-zero tensors shaped for `config`.
    pub fn zeros(config: &ModelConfig) -> Self {
        let mut input = config.input_dim;
        let lstm_layers = config
            .lstm_units
            .iter()
            .map(|&units| {
                let gate = || GateParams {
                    w: Matrix::zeros(units, input),
                    u: Matrix::zeros(units, units),
                    b: vec![0.0; units],
                };
                let layer = LstmLayerParams {
                    input: gate(),
                    forget: gate(),
                    output: gate(),
                    cell: gate(),
                };
                input = units;
                layer
            })
            .collect();
        let dense_layers = config
            .dense_units
            .iter()
            .map(|&out| {
                let layer = DenseParams {
                    w: Matrix::zeros(out, input),
                    b: vec![0.0; out],
                };
                input = out;
                layer
            })
            .collect();
        let heads = HeadParams {
            w: Matrix::zeros(config.n_heads, input),
            b: vec![0.0; config.n_heads],
        };
        Self {
            lstm_layers,
            dense_layers,
            heads,
        }
    }

    /// Tensor names and `(rows, cols)` shapes in declaration order.
    pub fn shapes(&self) -> Vec<(String, usize, usize)> {
        let mut out = Vec::new();
        for (l, layer) in self.lstm_layers.iter().enumerate() {
            for (name, g) in ["i", "f", "o", "g"].iter().zip(layer.gates()) {
                out.push((format!("lstm{l}.W_{name}"), g.w.rows(), g.w.cols()));
                out.push((format!("lstm{l}.U_{name}"), g.u.rows(), g.u.cols()));
                out.push((format!("lstm{l}.b_{name}"), g.b.len(), 1));
            }
        }
        for (d, layer) in self.dense_layers.iter().enumerate() {
            out.push((format!("dense{d}.W"), layer.w.rows(), layer.w.cols()));
            out.push((format!("dense{d}.b"), layer.b.len(), 1));
        }
        out.push(("heads.W".into(), self.heads.w.rows(), self.heads.w.cols()));
        out.push(("heads.b".into(), self.heads.b.len(), 1));
        out
    }

    /// Flat views of every tensor, in the same order as [`Weights::shapes`].
    pub fn tensors(&self) -> Vec<&[f64]> {
        let mut out: Vec<&[f64]> = Vec::new();
        for layer in &self.lstm_layers {
            for g in layer.gates() {
                out.extend([g.w.as_slice(), g.u.as_slice(), g.b.as_slice()]);
            }
        }
        for layer in &self.dense_layers {
            out.extend([layer.w.as_slice(), layer.b.as_slice()]);
        }
        out.extend([self.heads.w.as_slice(), self.heads.b.as_slice()]);
        out
    }

    pub fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        let mut out: Vec<&mut [f64]> = Vec::new();
        for layer in &mut self.lstm_layers {
            for g in layer.gates_mut() {
                out.push(g.w.as_mut_slice());
                out.push(g.u.as_mut_slice());
                out.push(g.b.as_mut_slice());
            }
        }
        for layer in &mut self.dense_layers {
            out.push(layer.w.as_mut_slice());
            out.push(layer.b.as_mut_slice());
        }
        out.push(self.heads.w.as_mut_slice());
        out.push(self.heads.b.as_mut_slice());
        out
    }

    pub fn n_params(&self) -> usize {
        self.tensors().iter().map(|t| t.len()).sum()
    }

    pub fn same_shape(&self, other: &Weights) -> bool {
        self.shapes() == other.shapes()
    }

    /// `self += other`; shapes must match.
    pub fn add_assign(&mut self, other: &Weights) {
        for (a, b) in self.tensors_mut().into_iter().zip(other.tensors()) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for t in self.tensors_mut() {
            t.iter_mut().for_each(|x| *x *= factor);
        }
    }

    pub fn all_finite(&self) -> bool {
        self.tensors().iter().all(|t| t.iter().all(|x| x.is_finite()))
    }
}

/// Trained weights plus the preprocessing they were trained against.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub weights: Weights,
    /// Applied to raw MFCCs before the forward pass.
    pub norm_stats: NormStats,
    /// Feature settings used for the training data.
    pub feature_config: MfccConfig,
    /// Bumped on every optimizer step so old forward caches are detectable.
    pub(crate) generation: u64,
}

impl ModelParams {
    pub fn new(weights: Weights, norm_stats: NormStats, feature_config: MfccConfig) -> Self {
        Self {
            weights,
            norm_stats,
            feature_config,
            generation: 0,
        }
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    /// Marks cached activations from earlier forward passes as stale.
    pub fn touch(&mut self) {
        self.generation = self.generation.wrapping_add(1);
    }

    pub fn check_against(&self, config: &ModelConfig) -> Result<(), ModelError> {
        let expected = Weights::zeros(config);
        if !self.weights.same_shape(&expected) {
            return Err(ModelError::ShapeMismatch(
                "parameters do not match the configured architecture".into(),
            ));
        }
        if self.norm_stats.dim() != config.input_dim {
            return Err(ModelError::DimensionMismatch {
                what: "normalization statistics",
                expected: config.input_dim,
                actual: self.norm_stats.dim(),
            });
        }
        Ok(())
    }
}

fn glorot_fill(rng: &mut ChaCha8Rng, data: &mut [f64], fan_in: usize, fan_out: usize) {
    let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
    for x in data {
        *x = rng.gen_range(-limit..limit);
    }
}

/// Glorot-uniform weights, zero biases except forget-gate biases of 1.0.
///
/// Fully determined by `config.seed`. Normalization starts as the identity.
pub fn init_params(config: &ModelConfig) -> Result<ModelParams, ModelError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut weights = Weights::zeros(config);
    for layer in &mut weights.lstm_layers {
        let (units, input) = (layer.units(), layer.input_dim());
        for g in layer.gates_mut() {
            glorot_fill(&mut rng, g.w.as_mut_slice(), input, units);
            glorot_fill(&mut rng, g.u.as_mut_slice(), units, units);
        }
        layer.forget.b.iter_mut().for_each(|b| *b = 1.0);
    }
    for layer in &mut weights.dense_layers {
        let (out, input) = layer.w.shape();
        glorot_fill(&mut rng, layer.w.as_mut_slice(), input, out);
    }
    // each head is its own single-output layer
    let head_in = weights.heads.w.cols();
    glorot_fill(&mut rng, weights.heads.w.as_mut_slice(), head_in, 1);
    Ok(ModelParams::new(
        weights,
        NormStats::identity(config.input_dim),
        MfccConfig {
            n_cepstral: config.input_dim,
            ..MfccConfig::default()
        },
    ))
}

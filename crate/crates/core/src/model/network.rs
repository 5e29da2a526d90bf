//! Whole-network forward pass and backpropagation through time.

use rand::Rng;

use super::lstm::sigmoid;
use super::{
    bce_grad, lstm_cell_backward, lstm_cell_forward, CellCache, ModelError, ModelParams, Weights,
};
use crate::matrix::axpy;
use crate::Matrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    /// Inverted dropout at `dropout_rate` after every dense layer but the last.
    Train { dropout_rate: f64 },
    Infer,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseCache {
    pub input: Vec<f64>,
    pub pre_activation: Vec<f64>,
    /// `0` or `1/(1-p)` per unit; `None` when no dropout was applied.
    pub dropout_mask: Option<Vec<f64>>,
    pub output: Vec<f64>,
}

/// Everything [`backward`] needs from one forward pass.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    pub mode: Mode,
    generation: u64,
    /// `[layer][time]`.
    pub steps: Vec<Vec<CellCache>>,
    pub dense: Vec<DenseCache>,
    pub head_input: Vec<f64>,
    pub probs: Vec<f64>,
}

impl ForwardCache {
    /// Top-layer hidden state at the final timestep.
    pub fn trunk_output(&self) -> Vec<f64> {
        self.steps
            .last()
            .and_then(|s| s.last())
            .map(CellCache::h)
            .unwrap_or_default()
    }
}

/// Runs `features` (`T × input_dim`, already normalized) through the network.
///
/// Returns one probability per head together with the cache for [`backward`].
pub fn forward<R: Rng + ?Sized>(
    features: &Matrix,
    params: &ModelParams,
    mode: Mode,
    rng: &mut R,
) -> Result<(Vec<f64>, ForwardCache), ModelError> {
    let w = &params.weights;
    let input_dim = w.lstm_layers[0].input_dim();
    if features.cols() != input_dim {
        return Err(ModelError::DimensionMismatch {
            what: "feature width",
            expected: input_dim,
            actual: features.cols(),
        });
    }
    if features.rows() == 0 {
        return Err(ModelError::DimensionMismatch {
            what: "sequence length (must be >= 1)",
            expected: 1,
            actual: 0,
        });
    }

    let mut steps = Vec::with_capacity(w.lstm_layers.len());
    let mut seq: Vec<Vec<f64>> = features.iter_rows().map(<[f64]>::to_vec).collect();
    for layer in &w.lstm_layers {
        let units = layer.units();
        let mut h = vec![0.0; units];
        let mut c = vec![0.0; units];
        let mut caches = Vec::with_capacity(seq.len());
        let mut outputs = Vec::with_capacity(seq.len());
        for x in &seq {
            let (h_next, c_next, cache) = lstm_cell_forward(x, &h, &c, layer)?;
            h = h_next;
            c = c_next;
            outputs.push(h.clone());
            caches.push(cache);
        }
        steps.push(caches);
        seq = outputs;
    }

    let mut act = seq.pop().expect("sequence has at least one step");
    let n_dense = w.dense_layers.len();
    let mut dense = Vec::with_capacity(n_dense);
    for (j, layer) in w.dense_layers.iter().enumerate() {
        let mut pre = layer.b.clone();
        layer.w.matvec_add(&act, &mut pre);
        let mut out: Vec<f64> = pre.iter().map(|&z| z.max(0.0)).collect();
        let dropout_mask = match mode {
            Mode::Train { dropout_rate } if dropout_rate > 0.0 && j + 1 < n_dense => {
                let keep = 1.0 / (1.0 - dropout_rate);
                let mask: Vec<f64> = (0..out.len())
                    .map(|_| if rng.gen::<f64>() < dropout_rate { 0.0 } else { keep })
                    .collect();
                out.iter_mut().zip(&mask).for_each(|(o, m)| *o *= m);
                Some(mask)
            }
            _ => None,
        };
        dense.push(DenseCache {
            input: std::mem::replace(&mut act, out.clone()),
            pre_activation: pre,
            dropout_mask,
            output: out,
        });
    }

    let mut logits = w.heads.b.clone();
    w.heads.w.matvec_add(&act, &mut logits);
    let probs: Vec<f64> = logits.into_iter().map(sigmoid).collect();

    let cache = ForwardCache {
        mode,
        generation: params.generation,
        steps,
        dense,
        head_input: act,
        probs: probs.clone(),
    };
    Ok((probs, cache))
}

/// Exact gradients of the mean per-head BCE with respect to every weight.
///
/// `cache` must come from a train-mode [`forward`] on the same, unmodified
/// `params`; the dropout masks it recorded are reused.
pub fn backward(
    cache: &ForwardCache,
    params: &ModelParams,
    labels: &[u8],
) -> Result<Weights, ModelError> {
    if !matches!(cache.mode, Mode::Train { .. }) {
        return Err(ModelError::StaleCache("cache comes from an inference-mode forward pass"));
    }
    if cache.generation != params.generation {
        return Err(ModelError::StaleCache("parameters changed since the forward pass"));
    }
    let w = &params.weights;
    let mut grads = Weights::zeros_like(w);

    let d_logits = bce_grad(&cache.probs, labels)?;
    grads.heads.w.add_outer(&d_logits, &cache.head_input);
    axpy(1.0, &d_logits, &mut grads.heads.b);
    let mut d_act = vec![0.0; cache.head_input.len()];
    w.heads.w.matvec_t_add(&d_logits, &mut d_act);

    for ((layer, grad), dc) in w
        .dense_layers
        .iter()
        .zip(grads.dense_layers.iter_mut())
        .zip(&cache.dense)
        .rev()
    {
        let d_pre: Vec<f64> = (0..d_act.len())
            .map(|k| {
                let masked = dc.dropout_mask.as_ref().map_or(d_act[k], |m| d_act[k] * m[k]);
                if dc.pre_activation[k] > 0.0 {
                    masked
                } else {
                    0.0
                }
            })
            .collect();
        grad.w.add_outer(&d_pre, &dc.input);
        axpy(1.0, &d_pre, &mut grad.b);
        let mut d_in = vec![0.0; dc.input.len()];
        layer.w.matvec_t_add(&d_pre, &mut d_in);
        d_act = d_in;
    }

    // Only the final step of the top layer feeds the dense stack.
    let t_len = cache.steps[0].len();
    let top_units = d_act.len();
    let mut d_seq: Vec<Vec<f64>> = vec![vec![0.0; top_units]; t_len];
    d_seq[t_len - 1] = d_act;

    for ((layer, grad), steps) in w
        .lstm_layers
        .iter()
        .zip(grads.lstm_layers.iter_mut())
        .zip(&cache.steps)
        .rev()
    {
        let units = layer.units();
        let mut dh_next = vec![0.0; units];
        let mut dc_next = vec![0.0; units];
        let mut d_inputs = vec![Vec::new(); t_len];
        for t in (0..t_len).rev() {
            let mut dh = std::mem::take(&mut d_seq[t]);
            axpy(1.0, &dh_next, &mut dh);
            let out = lstm_cell_backward(&dh, &dc_next, &steps[t], layer, grad);
            dh_next = out.dh_prev;
            dc_next = out.dc_prev;
            d_inputs[t] = out.dx;
        }
        d_seq = d_inputs;
    }
    Ok(grads)
}

/// Inference on raw (unnormalized) features: applies the stored normalization
/// and returns one probability per head.
pub fn predict(params: &ModelParams, raw_features: &Matrix) -> Result<Vec<f64>, ModelError> {
    if raw_features.cols() != params.norm_stats.dim() {
        return Err(ModelError::DimensionMismatch {
            what: "feature width",
            expected: params.norm_stats.dim(),
            actual: raw_features.cols(),
        });
    }
    let x = params.norm_stats.apply(raw_features);
    // Infer mode never draws from the generator.
    let mut rng = rand::rngs::mock::StepRng::new(0, 0);
    forward(&x, params, Mode::Infer, &mut rng).map(|(p, _)| p)
}

impl Weights {
    pub fn zeros_like(other: &Weights) -> Weights {
        let mut w = other.clone();
        for t in w.tensors_mut() {
            t.iter_mut().for_each(|x| *x = 0.0);
        }
        w
    }
}

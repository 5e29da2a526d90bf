use serde::{Deserialize, Serialize};

use super::{ModelError, ModelParams, Weights};

pub const DEFAULT_CLIP_NORM: f64 = 5.0;

/// RMSprop hyperparameters and running mean-square accumulators.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerState {
    pub v: Weights,
    pub lr: f64,
    pub rho: f64,
    pub eps: f64,
    pub steps: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RmsPropConfig {
    pub lr: f64,
    pub rho: f64,
    pub eps: f64,
}

impl Default for RmsPropConfig {
    fn default() -> Self {
        Self {
            lr: 0.0005,
            rho: 0.9,
            eps: 1e-8,
        }
    }
}

impl OptimizerState {
    /// Fresh zero accumulators at the default `lr = 5e-4, ρ = 0.9, ε = 1e-8`.
    pub fn new(shape_of: &Weights) -> Self {
        Self::with_config(shape_of, RmsPropConfig::default())
    }

    pub fn with_config(shape_of: &Weights, cfg: RmsPropConfig) -> Self {
        Self {
            v: Weights::zeros_like(shape_of),
            lr: cfg.lr,
            rho: cfg.rho,
            eps: cfg.eps,
            steps: 0,
        }
    }
}

/// `v ← ρv + (1-ρ)g²;  θ ← θ - lr·g/(√v + ε)` elementwise over one tensor.
pub fn rmsprop_update(theta: &mut [f64], grad: &[f64], v: &mut [f64], lr: f64, rho: f64, eps: f64) {
    for ((t, &g), v) in theta.iter_mut().zip(grad).zip(v.iter_mut()) {
        *v = rho * *v + (1.0 - rho) * g * g;
        *t -= lr * g / (v.sqrt() + eps);
    }
}

pub fn rmsprop_step(
    params: &mut ModelParams,
    grads: &Weights,
    state: &mut OptimizerState,
) -> Result<(), ModelError> {
    if !params.weights.same_shape(grads) || !params.weights.same_shape(&state.v) {
        return Err(ModelError::ShapeMismatch(
            "gradients, accumulators and parameters must share one shape".into(),
        ));
    }
    for ((theta, g), v) in params
        .weights
        .tensors_mut()
        .into_iter()
        .zip(grads.tensors())
        .zip(state.v.tensors_mut())
    {
        rmsprop_update(theta, g, v, state.lr, state.rho, state.eps);
    }
    state.steps += 1;
    params.touch();
    Ok(())
}

pub fn global_norm(grads: &Weights) -> f64 {
    grads
        .tensors()
        .iter()
        .flat_map(|t| t.iter())
        .map(|g| g * g)
        .sum::<f64>()
        .sqrt()
}

/// Rescales `grads` so their global L2 norm is at most `max_norm`.
/// Returns the norm before clipping.
pub fn clip_global_norm(grads: &mut Weights, max_norm: f64) -> f64 {
    let norm = global_norm(grads);
    if norm > max_norm {
        grads.scale(max_norm / norm);
    }
    norm
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{init_params, ModelConfig};

    fn tiny() -> ModelParams {
        init_params(&ModelConfig {
            input_dim: 2,
            lstm_units: vec![3],
            dense_units: vec![2],
            ..Default::default()
        })
        .unwrap()
    }

    #[test]
    fn scalar_steps_match_hand_values() {
        let (mut theta, mut v) = ([0.0], [0.0]);
        rmsprop_update(&mut theta, &[1.0], &mut v, 0.0005, 0.9, 1e-8);
        assert!((v[0] - 0.1).abs() < 1e-15);
        assert!((theta[0] - (-0.0005 / (0.1f64.sqrt() + 1e-8))).abs() < 1e-15);
        assert!((theta[0] + 0.0015811).abs() < 1e-7);
        let before = theta[0];
        rmsprop_update(&mut theta, &[1.0], &mut v, 0.0005, 0.9, 1e-8);
        assert!((v[0] - 0.19).abs() < 1e-15);
        assert!((theta[0] - before + 0.0011471).abs() < 1e-7);
    }

    #[test]
    fn zero_gradient_leaves_params_and_decays_v() {
        let mut p = tiny();
        let before = p.weights.clone();
        let mut state = OptimizerState::new(&p.weights);
        for t in state.v.tensors_mut() {
            t.iter_mut().for_each(|v| *v = 2.0);
        }
        let zeros = Weights::zeros_like(&p.weights);
        rmsprop_step(&mut p, &zeros, &mut state).unwrap();
        assert_eq!(p.weights, before);
        assert!(state.v.tensors().iter().all(|t| t.iter().all(|&v| (v - 1.8).abs() < 1e-15)));
    }

    #[test]
    fn shape_mismatch() {
        let mut p = tiny();
        let other = init_params(&ModelConfig {
            input_dim: 2,
            lstm_units: vec![4],
            dense_units: vec![2],
            ..Default::default()
        })
        .unwrap();
        let mut state = OptimizerState::new(&p.weights);
        assert!(matches!(
            rmsprop_step(&mut p, &other.weights, &mut state),
            Err(ModelError::ShapeMismatch(_))
        ));
    }

    #[test]
    fn clipping_bounds_norm() {
        let mut g = tiny().weights;
        g.scale(100.0);
        let before = clip_global_norm(&mut g, DEFAULT_CLIP_NORM);
        assert!(before > DEFAULT_CLIP_NORM);
        assert!(global_norm(&g) <= DEFAULT_CLIP_NORM + 1e-12);

        let mut small = tiny().weights;
        small.scale(1e-3);
        let copy = small.clone();
        clip_global_norm(&mut small, DEFAULT_CLIP_NORM);
        assert_eq!(small, copy);
    }
}

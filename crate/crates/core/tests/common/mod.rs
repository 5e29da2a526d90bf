//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tajweed_core::model::{backward, bce_loss, forward, init_params, ModelConfig, ModelParams, Mode};
use tajweed_core::Matrix;

pub const EPS: f64 = 1e-5;
pub const REL_TOL: f64 = 1e-4;

pub fn tiny_config(seed: u64) -> ModelConfig {
    ModelConfig {
        input_dim: 3,
        lstm_units: vec![4, 4, 4],
        dense_units: vec![3, 3, 2],
        dropout_rate: 0.0,
        n_heads: 3,
        seed,
    }
}

pub fn loss(params: &ModelParams, x: &Matrix, labels: &[u8]) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let (p, _) = forward(x, params, Mode::Train { dropout_rate: 0.0 }, &mut rng).unwrap();
    bce_loss(&p, labels).unwrap()
}

pub struct Point {
    pub params: ModelParams,
    pub x: Matrix,
    pub labels: [u8; 3],
}

/// Tiny model with every dense ReLU switched on, T = 5, C = 3.
pub fn point(seed: u64, labels: [u8; 3]) -> Point {
    let mut params = init_params(&tiny_config(seed)).unwrap();
    for d in &mut params.weights.dense_layers {
        d.b.iter_mut().for_each(|b| *b = 0.5);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed + 100);
    let x = Matrix::from_vec(5, 3, (0..15).map(|_| rng.gen_range(-2.0..2.0)).collect());
    Point { params, x, labels }
}

/// `(name, analytic, finite difference)` for every parameter.
pub fn compare(pt: &mut Point) -> Vec<(String, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let (_, cache) = forward(&pt.x, &pt.params, Mode::Train { dropout_rate: 0.0 }, &mut rng).unwrap();
    let analytic = backward(&cache, &pt.params, &pt.labels).unwrap();
    let names = analytic.shapes();
    let mut out = Vec::new();
    for (ti, grad) in analytic.tensors().iter().enumerate() {
        for (k, &a) in grad.iter().enumerate() {
            let orig = pt.params.weights.tensors()[ti][k];
            pt.params.weights.tensors_mut()[ti][k] = orig + EPS;
            let lp = loss(&pt.params, &pt.x, &pt.labels);
            pt.params.weights.tensors_mut()[ti][k] = orig - EPS;
            let lm = loss(&pt.params, &pt.x, &pt.labels);
            pt.params.weights.tensors_mut()[ti][k] = orig;
            out.push((format!("{}[{k}]", names[ti].0), a, (lp - lm) / (2.0 * EPS)));
        }
    }
    out
}

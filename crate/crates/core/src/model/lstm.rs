//! A single LSTM step and its exact backward pass.

use super::{LstmLayerParams, ModelError};
use crate::matrix::axpy;

/// Activations of one step, kept for backpropagation.
#[derive(Debug, Clone, PartialEq)]
pub struct CellCache {
    pub x: Vec<f64>,
    pub h_prev: Vec<f64>,
    pub c_prev: Vec<f64>,
    pub i: Vec<f64>,
    pub f: Vec<f64>,
    pub o: Vec<f64>,
    pub g: Vec<f64>,
    pub c: Vec<f64>,
    pub tanh_c: Vec<f64>,
}

impl CellCache {
    pub fn h(&self) -> Vec<f64> {
        self.o.iter().zip(&self.tanh_c).map(|(o, t)| o * t).collect()
    }
}

/// Gradients flowing out of one step.
#[derive(Debug, Clone, PartialEq)]
pub struct CellGrads {
    pub dx: Vec<f64>,
    pub dh_prev: Vec<f64>,
    pub dc_prev: Vec<f64>,
}

#[inline]
pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn check_len(what: &'static str, expected: usize, actual: usize) -> Result<(), ModelError> {
    if expected == actual {
        Ok(())
    } else {
        Err(ModelError::DimensionMismatch {
            what,
            expected,
            actual,
        })
    }
}

/// ```text
/// i = σ(W_i x + U_i h + b_i)    f = σ(W_f x + U_f h + b_f)
/// o = σ(W_o x + U_o h + b_o)    g = tanh(W_g x + U_g h + b_g)
/// c' = f ⊙ c + i ⊙ g            h' = o ⊙ tanh(c')
/// ```
pub fn lstm_cell_forward(
    x: &[f64],
    h_prev: &[f64],
    c_prev: &[f64],
    p: &LstmLayerParams,
) -> Result<(Vec<f64>, Vec<f64>, CellCache), ModelError> {
    let units = p.units();
    check_len("LSTM input", p.input_dim(), x.len())?;
    check_len("LSTM hidden state", units, h_prev.len())?;
    check_len("LSTM cell state", units, c_prev.len())?;

    let pre = |gate: &super::GateParams| {
        let mut z = gate.b.clone();
        gate.w.matvec_add(x, &mut z);
        gate.u.matvec_add(h_prev, &mut z);
        z
    };
    let mut i = pre(&p.input);
    let mut f = pre(&p.forget);
    let mut o = pre(&p.output);
    let mut g = pre(&p.cell);
    i.iter_mut().for_each(|z| *z = sigmoid(*z));
    f.iter_mut().for_each(|z| *z = sigmoid(*z));
    o.iter_mut().for_each(|z| *z = sigmoid(*z));
    g.iter_mut().for_each(|z| *z = z.tanh());

    let c: Vec<f64> = (0..units).map(|k| f[k] * c_prev[k] + i[k] * g[k]).collect();
    let tanh_c: Vec<f64> = c.iter().map(|v| v.tanh()).collect();
    let h: Vec<f64> = o.iter().zip(&tanh_c).map(|(o, t)| o * t).collect();
    let cache = CellCache {
        x: x.to_vec(),
        h_prev: h_prev.to_vec(),
        c_prev: c_prev.to_vec(),
        i,
        f,
        o,
        g,
        c: c.clone(),
        tanh_c,
    };
    Ok((h, c, cache))
}

/// Backpropagates `dh` (total gradient on `h_t`) and `dc` (gradient on `c_t`
/// arriving from step `t + 1`) through one step, accumulating parameter
/// gradients into `grads`.
pub fn lstm_cell_backward(
    dh: &[f64],
    dc: &[f64],
    cache: &CellCache,
    p: &LstmLayerParams,
    grads: &mut LstmLayerParams,
) -> CellGrads {
    let units = p.units();
    let mut dz = [vec![0.0; units], vec![0.0; units], vec![0.0; units], vec![0.0; units]];
    let mut dc_prev = vec![0.0; units];
    for k in 0..units {
        let (i, f, o, g, t) = (cache.i[k], cache.f[k], cache.o[k], cache.g[k], cache.tanh_c[k]);
        let d_o = dh[k] * t;
        let d_c = dh[k] * o * (1.0 - t * t) + dc[k];
        let d_i = d_c * g;
        let d_g = d_c * i;
        let d_f = d_c * cache.c_prev[k];
        dc_prev[k] = d_c * f;
        dz[0][k] = d_i * i * (1.0 - i);
        dz[1][k] = d_f * f * (1.0 - f);
        dz[2][k] = d_o * o * (1.0 - o);
        dz[3][k] = d_g * (1.0 - g * g);
    }

    let mut dx = vec![0.0; p.input_dim()];
    let mut dh_prev = vec![0.0; units];
    for ((gate, grad), dz) in p.gates().into_iter().zip(grads.gates_mut()).zip(&dz) {
        grad.w.add_outer(dz, &cache.x);
        grad.u.add_outer(dz, &cache.h_prev);
        axpy(1.0, dz, &mut grad.b);
        gate.w.matvec_t_add(dz, &mut dx);
        gate.u.matvec_t_add(dz, &mut dh_prev);
    }
    CellGrads {
        dx,
        dh_prev,
        dc_prev,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ModelConfig, Weights};
    use crate::Matrix;

    fn zero_layer(units: usize, input: usize) -> LstmLayerParams {
        let cfg = ModelConfig {
            input_dim: input,
            lstm_units: vec![units],
            ..Default::default()
        };
        Weights::zeros(&cfg).lstm_layers.remove(0)
    }

    #[test]
    fn zero_weights_zero_state() {
        let p = zero_layer(3, 2);
        let (h, c, cache) = lstm_cell_forward(&[0.7, -1.2], &[0.0; 3], &[0.0; 3], &p).unwrap();
        assert_eq!(cache.i, vec![0.5; 3]);
        assert_eq!(cache.f, vec![0.5; 3]);
        assert_eq!(cache.o, vec![0.5; 3]);
        assert_eq!(cache.g, vec![0.0; 3]);
        assert_eq!(c, vec![0.0; 3]);
        assert_eq!(h, vec![0.0; 3]);
    }

    #[test]
    fn zero_weights_carry_half_the_cell() {
        let p = zero_layer(2, 1);
        let (h, c, _) = lstm_cell_forward(&[3.0], &[0.0; 2], &[0.8, -2.0], &p).unwrap();
        assert_eq!(c, vec![0.4, -1.0]);
        assert_eq!(h, vec![0.5 * 0.4f64.tanh(), 0.5 * (-1.0f64).tanh()]);
    }

    #[test]
    fn scalar_cell_matches_scripted_equations() {
        let mut p = zero_layer(1, 1);
        let vals = [(0.3, -0.4, 0.1), (0.5, 0.2, 1.0), (-0.6, 0.7, -0.2), (0.9, -0.1, 0.05)];
        for (gate, (w, u, b)) in p.gates_mut().into_iter().zip(vals) {
            gate.w = Matrix::from_vec(1, 1, vec![w]);
            gate.u = Matrix::from_vec(1, 1, vec![u]);
            gate.b = vec![b];
        }
        let (x, h0, c0) = (0.8, -0.25, 0.6);
        let (h, c, _) = lstm_cell_forward(&[x], &[h0], &[c0], &p).unwrap();

        let s = |z: f64| 1.0 / (1.0 + (-z).exp());
        let i = s(0.3 * x - 0.4 * h0 + 0.1);
        let f = s(0.5 * x + 0.2 * h0 + 1.0);
        let o = s(-0.6 * x + 0.7 * h0 - 0.2);
        let g = (0.9 * x - 0.1 * h0 + 0.05).tanh();
        let c_want = f * c0 + i * g;
        let h_want = o * c_want.tanh();
        assert!((c[0] - c_want).abs() < 1e-15);
        assert!((h[0] - h_want).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch() {
        let p = zero_layer(2, 3);
        assert!(matches!(
            lstm_cell_forward(&[0.0; 2], &[0.0; 2], &[0.0; 2], &p),
            Err(ModelError::DimensionMismatch { what: "LSTM input", expected: 3, actual: 2 })
        ));
        assert!(lstm_cell_forward(&[0.0; 3], &[0.0; 1], &[0.0; 2], &p).is_err());
    }

    #[test]
    fn sigmoid_is_stable_at_extremes() {
        assert_eq!(sigmoid(0.0), 0.5);
        assert!(sigmoid(-800.0) >= 0.0 && sigmoid(800.0) <= 1.0);
        assert!(sigmoid(-800.0).is_finite());
    }
}

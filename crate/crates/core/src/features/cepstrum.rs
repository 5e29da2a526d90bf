use std::f64::consts::PI;

use super::FeatureError;
use crate::Matrix;

pub const DEFAULT_LOG_FLOOR: f64 = 1e-10;

/// Natural log of each energy, floored so silence stays finite.
pub fn log_energies(energies: &[f64], floor_value: f64) -> Vec<f64> {
    energies.iter().map(|&e| e.max(floor_value).ln()).collect()
}

/// First `n_cepstral` rows of the orthonormal DCT-II matrix of size `n_inputs`.
pub fn dct_matrix(n_inputs: usize, n_cepstral: usize) -> Result<Matrix, FeatureError> {
    if n_cepstral == 0 || n_cepstral > n_inputs {
        return Err(FeatureError::BadCoefficientCount {
            requested: n_cepstral,
            available: n_inputs,
        });
    }
    let f = n_inputs as f64;
    let mut m = Matrix::zeros(n_cepstral, n_inputs);
    for n in 0..n_cepstral {
        let scale = if n == 0 { (1.0 / f).sqrt() } else { (2.0 / f).sqrt() };
        for (k, v) in m.row_mut(n).iter_mut().enumerate() {
            *v = scale * (PI * n as f64 * (k as f64 + 0.5) / f).cos();
        }
    }
    Ok(m)
}

/// Orthonormal DCT-II, keeping coefficients `0..n_cepstral`.
pub fn dct(log_energies: &[f64], n_cepstral: usize) -> Result<Vec<f64>, FeatureError> {
    let m = dct_matrix(log_energies.len(), n_cepstral)?;
    let mut out = vec![0.0; n_cepstral];
    m.matvec_into(log_energies, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn log_examples() {
        assert_eq!(log_energies(&[1.0], 1e-10), vec![0.0]);
        let floored = log_energies(&[0.0], 1e-10)[0];
        assert!((floored - (-23.025850929940457)).abs() < 1e-12);
        let a = log_energies(&[3.0, 0.5, 0.0], 1e-10);
        let b = log_energies(&[2.0, 0.5, 0.0], 1e-10);
        assert!(a.iter().zip(&b).all(|(x, y)| x >= y));
    }

    #[test]
    fn constant_input_is_dc_only() {
        let y = dct(&[2.5; 40], 40).unwrap();
        assert!((y[0] - 2.5 * 40f64.sqrt()).abs() < 1e-12);
        assert!(y[1..].iter().all(|v| v.abs() < 1e-12));
        assert_eq!(dct(&[0.0; 40], 13).unwrap(), vec![0.0; 13]);
    }

    #[test]
    fn coefficient_count_checked() {
        assert!(matches!(dct(&[1.0; 4], 5), Err(FeatureError::BadCoefficientCount { .. })));
        assert!(dct(&[1.0; 4], 0).is_err());
    }

    #[test]
    fn transpose_inverts_full_transform() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = 40;
        let m = dct_matrix(f, f).unwrap();
        for _ in 0..20 {
            let x: Vec<f64> = (0..f).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let y = dct(&x, f).unwrap();
            let mut back = vec![0.0; f];
            m.matvec_t_add(&y, &mut back);
            for (a, b) in x.iter().zip(&back) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }
}

use crate::features::FeatureSequence;
use crate::Matrix;

/// Per-coefficient means followed by per-coefficient population standard
/// deviations (`2C` values).
#[derive(Debug, Clone, PartialEq)]
pub struct PooledVector(pub Vec<f64>);

impl PooledVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

pub fn pool_matrix(m: &Matrix) -> PooledVector {
    let (t, c) = m.shape();
    assert!(t >= 1, "cannot pool an empty sequence");
    let n = t as f64;
    let mut mean = vec![0.0; c];
    for row in m.iter_rows() {
        for (s, x) in mean.iter_mut().zip(row) {
            *s += x;
        }
    }
    mean.iter_mut().for_each(|s| *s /= n);
    let mut var = vec![0.0; c];
    for row in m.iter_rows() {
        for ((v, x), mu) in var.iter_mut().zip(row).zip(&mean) {
            *v += (x - mu) * (x - mu);
        }
    }
    mean.extend(var.into_iter().map(|v| (v / n).sqrt()));
    PooledVector(mean)
}

pub fn pool_features(seq: &FeatureSequence) -> PooledVector {
    pool_matrix(&seq.coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constant_sequence() {
        let m = Matrix::from_rows(&vec![vec![1.0, -2.0, 3.0]; 4]).unwrap();
        assert_eq!(pool_matrix(&m).0, vec![1.0, -2.0, 3.0, 0.0, 0.0, 0.0]);
        let single = Matrix::from_rows(&[vec![5.0, 6.0]]).unwrap();
        assert_eq!(pool_matrix(&single).0, vec![5.0, 6.0, 0.0, 0.0]);
    }

    #[test]
    fn two_point_statistics() {
        let m = Matrix::from_rows(&[vec![0.0; 13], vec![2.0; 13]]).unwrap();
        let p = pool_matrix(&m);
        assert_eq!(p.len(), 26);
        assert!(p.0.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn matches_column_statistics_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let m = Matrix::from_vec(50, 13, (0..650).map(|_| rng.gen_range(-20.0..20.0)).collect());
        let p = pool_matrix(&m);
        for c in 0..13 {
            let col: Vec<f64> = (0..50).map(|t| m.get(t, c)).collect();
            let mean = col.iter().sum::<f64>() / 50.0;
            // E[x²] - E[x]² route, independent of the two-pass implementation
            let sq = col.iter().map(|x| x * x).sum::<f64>() / 50.0;
            let std = (sq - mean * mean).sqrt();
            assert!((p.0[c] - mean).abs() < 1e-12);
            assert!((p.0[13 + c] - std).abs() < 1e-12);
        }
    }
}

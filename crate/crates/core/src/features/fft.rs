//! Iterative radix-2 Cooley-Tukey FFT and the direct DFT it is checked against.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::FeatureError;

/// Precomputed bit-reversal permutation and twiddle factors for one length.
#[derive(Debug, Clone)]
pub struct FftPlan {
    len: usize,
    bitrev: Vec<usize>,
    /// `e^{-2πik/K}` for `k < K/2`.
    twiddles: Vec<Complex64>,
}

impl FftPlan {
    pub fn new(len: usize) -> Result<Self, FeatureError> {
        if len == 0 || !len.is_power_of_two() {
            return Err(FeatureError::NotPowerOfTwo(len));
        }
        let bits = len.trailing_zeros();
        let bitrev = (0..len)
            .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (usize::BITS - bits) })
            .collect();
        let twiddles = (0..len / 2)
            .map(|k| Complex64::from_polar(1.0, -2.0 * PI * k as f64 / len as f64))
            .collect();
        Ok(Self {
            len,
            bitrev,
            twiddles,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Transforms a real frame; input shorter than the plan is zero-padded.
    pub fn transform_real(&self, frame: &[f64]) -> Result<Vec<Complex64>, FeatureError> {
        if frame.len() > self.len {
            return Err(FeatureError::LengthMismatch {
                expected: self.len,
                actual: frame.len(),
            });
        }
        let mut buf = vec![Complex64::default(); self.len];
        for (i, &x) in frame.iter().enumerate() {
            buf[self.bitrev[i]] = Complex64::new(x, 0.0);
        }
        self.butterflies(&mut buf);
        Ok(buf)
    }

    fn butterflies(&self, buf: &mut [Complex64]) {
        let n = self.len;
        let mut half = 1;
        while half < n {
            let span = half * 2;
            let stride = n / span;
            for block in buf.chunks_exact_mut(span) {
                let (lo, hi) = block.split_at_mut(half);
                for (j, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    let t = *b * self.twiddles[j * stride];
                    *b = *a - t;
                    *a += t;
                }
            }
            half = span;
        }
    }
}

/// `X[n] = Σ_k x[k]·e^{-2πikn/K}` for a power-of-two length `K`.
pub fn fft(frame: &[f64]) -> Result<Vec<Complex64>, FeatureError> {
    FftPlan::new(frame.len())?.transform_real(frame)
}

/// Direct O(K²) evaluation of the DFT, valid for any non-empty length.
pub fn dft_naive(frame: &[f64]) -> Vec<Complex64> {
    let k_len = frame.len();
    (0..k_len)
        .map(|n| {
            frame
                .iter()
                .enumerate()
                .map(|(k, &x)| {
                    // reduce k·n mod K first so the angle stays small and exact
                    let angle = -2.0 * PI * ((k * n) % k_len) as f64 / k_len as f64;
                    Complex64::from_polar(x, angle)
                })
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn max_err(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn impulse_is_flat() {
        let x = fft(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(x.iter().all(|v| *v == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn cosine_concentrates_in_two_bins() {
        let x: Vec<f64> = (0..8).map(|k| (2.0 * PI * k as f64 / 8.0).cos()).collect();
        let spec = fft(&x).unwrap();
        let oracle = dft_naive(&x);
        assert!(max_err(&spec, &oracle) < 1e-12);
        for (n, v) in spec.iter().enumerate() {
            let expected = if n == 1 || n == 7 { 4.0 } else { 0.0 };
            assert!((v.norm() - expected).abs() < 1e-12, "bin {n}: {v}");
        }
    }

    #[test]
    fn naive_small_cases() {
        assert_eq!(dft_naive(&[1.0]), vec![Complex64::new(1.0, 0.0)]);
        let two = dft_naive(&[1.0, 1.0]);
        assert!((two[0] - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        assert!(two[1].norm() < 1e-15);
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(matches!(fft(&[1.0; 6]), Err(FeatureError::NotPowerOfTwo(6))));
        assert!(matches!(fft(&[]), Err(FeatureError::NotPowerOfTwo(0))));
    }

    #[test]
    fn length_one() {
        assert_eq!(fft(&[3.5]).unwrap(), vec![Complex64::new(3.5, 0.0)]);
    }

    #[test]
    fn matches_naive_on_random_signals() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in 0..=9 {
            let len = 1usize << p;
            for _ in 0..10 {
                let x: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
                assert!(max_err(&fft(&x).unwrap(), &dft_naive(&x)) < 1e-9);
            }
        }
    }

    #[test]
    fn plan_zero_pads() {
        let plan = FftPlan::new(8).unwrap();
        let padded = plan.transform_real(&[1.0, 2.0, 3.0]).unwrap();
        let oracle = dft_naive(&[1.0, 2.0, 3.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(max_err(&padded, &oracle) < 1e-12);
        assert!(plan.transform_real(&[0.0; 9]).is_err());
    }
}

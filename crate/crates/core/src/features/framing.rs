use num_complex::Complex64;

use super::{FeatureError, MfccConfig};
use crate::Matrix;

/// Overlapping analysis frames cut from one signal.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameMatrix {
    pub frames: Matrix,
    pub sample_rate_hz: u32,
}

/// First-order high-pass `y[n] = x[n] - α·x[n-1]`, with `y[0] = x[0]`.
pub fn pre_emphasize(samples: &[f64], alpha: f64) -> Result<Vec<f64>, FeatureError> {
    if samples.is_empty() {
        return Err(FeatureError::EmptyInput);
    }
    let mut out = Vec::with_capacity(samples.len());
    out.push(samples[0]);
    out.extend(samples.windows(2).map(|w| w[1] - alpha * w[0]));
    Ok(out)
}

/// Cuts `samples` into frames of `round(frame_len_ms·rate)` samples every
/// `round(hop_len_ms·rate)` samples.
///
/// Produces `1 + floor((len - S) / hop)` frames when `len >= S`; trailing
/// samples that do not fill a whole hop are dropped. A signal shorter than one
/// frame becomes a single zero-padded frame.
pub fn frame_signal(
    samples: &[f64],
    sample_rate_hz: u32,
    config: &MfccConfig,
) -> Result<FrameMatrix, FeatureError> {
    if samples.is_empty() {
        return Err(FeatureError::EmptyInput);
    }
    let width = config.frame_len_samples(sample_rate_hz);
    let hop = config.hop_len_samples(sample_rate_hz);
    if width == 0 || hop == 0 {
        return Err(FeatureError::BadConfig(format!(
            "frame length {width} and hop {hop} must both be positive"
        )));
    }
    let n_frames = if samples.len() >= width {
        1 + (samples.len() - width) / hop
    } else {
        1
    };
    let mut frames = Matrix::zeros(n_frames, width);
    for t in 0..n_frames {
        let start = t * hop;
        let end = (start + width).min(samples.len());
        frames.row_mut(t)[..end - start].copy_from_slice(&samples[start..end]);
    }
    Ok(FrameMatrix {
        frames,
        sample_rate_hz,
    })
}

/// Generalized Hamming window `a - (1-a)·cos(2πn/(N-1))`.
pub fn hamming_window(n_len: usize, a: f64) -> Vec<f64> {
    match n_len {
        0 => Vec::new(),
        1 => vec![1.0],
        _ => {
            let denom = (n_len - 1) as f64;
            (0..n_len)
                .map(|n| a - (1.0 - a) * (2.0 * std::f64::consts::PI * n as f64 / denom).cos())
                .collect()
        }
    }
}

pub fn apply_window(frames: &FrameMatrix, window: &[f64]) -> Result<FrameMatrix, FeatureError> {
    if window.len() != frames.frames.cols() {
        return Err(FeatureError::LengthMismatch {
            expected: frames.frames.cols(),
            actual: window.len(),
        });
    }
    let mut out = frames.clone();
    for t in 0..out.frames.rows() {
        for (x, w) in out.frames.row_mut(t).iter_mut().zip(window) {
            *x *= w;
        }
    }
    Ok(out)
}

/// One-sided power spectrum `|X[n]|² / K` for `n = 0..=K/2`.
pub fn power_spectrum(spectrum: &[Complex64]) -> Vec<f64> {
    let k = spectrum.len();
    debug_assert!(k % 2 == 0, "power_spectrum expects an even-length spectrum");
    let scale = 1.0 / k as f64;
    spectrum[..=k / 2].iter().map(|x| x.norm_sqr() * scale).collect()
}

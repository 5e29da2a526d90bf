//! Mel scale conversion and the triangular filterbank over power-spectrum bins.

use super::{FeatureError, MfccConfig};
use crate::Matrix;

pub fn hz_to_mel(f_hz: f64, mel_constant: f64) -> Result<f64, FeatureError> {
    if f_hz < 0.0 {
        return Err(FeatureError::NegativeFrequency(f_hz));
    }
    Ok(mel_constant * (1.0 + f_hz / 700.0).log10())
}

pub fn mel_to_hz(mel: f64, mel_constant: f64) -> f64 {
    700.0 * (10f64.powf(mel / mel_constant) - 1.0)
}

/// `F` triangular filters over `K/2 + 1` power-spectrum bins.
#[derive(Debug, Clone, PartialEq)]
pub struct MelFilterBank {
    pub weights: Matrix,
    /// `F + 2` FFT bin indices: left edge, the `F` peaks, right edge.
    pub center_bins: Vec<usize>,
    /// The same `F + 2` points in Hz before quantization to bins.
    pub center_hz: Vec<f64>,
}

impl MelFilterBank {
    pub fn n_filters(&self) -> usize {
        self.weights.rows()
    }

    pub fn n_bins(&self) -> usize {
        self.weights.cols()
    }

    /// Support of each filter in Hz, from its left to its right edge frequency.
    pub fn filter_widths_hz(&self) -> Vec<f64> {
        self.center_hz.windows(3).map(|w| w[2] - w[0]).collect()
    }
}

pub fn build_mel_filterbank(
    config: &MfccConfig,
    sample_rate_hz: u32,
) -> Result<MelFilterBank, FeatureError> {
    let n_filters = config.n_mel_filters;
    if n_filters == 0 {
        return Err(FeatureError::BadConfig("n_mel_filters must be positive".into()));
    }
    if !config.fft_size.is_power_of_two() {
        return Err(FeatureError::NotPowerOfTwo(config.fft_size));
    }
    let rate = f64::from(sample_rate_hz);
    let high = config.high_freq(sample_rate_hz);
    if high > rate / 2.0 || config.low_freq_hz >= high {
        return Err(FeatureError::BadConfig(format!(
            "filterbank edges {}..{high} Hz invalid for rate {sample_rate_hz}",
            config.low_freq_hz
        )));
    }
    let k = config.fft_size;
    let n_bins = k / 2 + 1;

    let mel_lo = hz_to_mel(config.low_freq_hz, config.mel_constant)?;
    let mel_hi = hz_to_mel(high, config.mel_constant)?;
    let step = (mel_hi - mel_lo) / (n_filters + 1) as f64;
    let center_hz: Vec<f64> = (0..n_filters + 2)
        .map(|i| mel_to_hz(mel_lo + step * i as f64, config.mel_constant))
        .collect();
    let center_bins: Vec<usize> = center_hz
        .iter()
        .map(|&f| (((k + 1) as f64 * f / rate).floor() as usize).min(n_bins - 1))
        .collect();

    let mut weights = Matrix::zeros(n_filters, n_bins);
    for m in 1..=n_filters {
        let (left, center, right) = (center_bins[m - 1], center_bins[m], center_bins[m + 1]);
        if left == center || center == right {
            return Err(FeatureError::DegenerateFilter {
                filter: m - 1,
                bin: center,
            });
        }
        let row = weights.row_mut(m - 1);
        for (b, w) in row.iter_mut().enumerate().take(center + 1).skip(left) {
            *w = (b - left) as f64 / (center - left) as f64;
        }
        for (b, w) in row.iter_mut().enumerate().take(right + 1).skip(center) {
            *w = (right - b) as f64 / (right - center) as f64;
        }
    }

    Ok(MelFilterBank {
        weights,
        center_bins,
        center_hz,
    })
}

/// Filterbank energies `E[m] = Σ_n w[m][n]·P[n]`.
pub fn apply_filterbank(power: &[f64], bank: &MelFilterBank) -> Result<Vec<f64>, FeatureError> {
    if power.len() != bank.n_bins() {
        return Err(FeatureError::LengthMismatch {
            expected: bank.n_bins(),
            actual: power.len(),
        });
    }
    let mut out = vec![0.0; bank.n_filters()];
    bank.weights.matvec_into(power, &mut out);
    Ok(out)
}

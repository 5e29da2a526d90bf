use serde::{Deserialize, Serialize};

use super::{
    apply_filterbank, build_mel_filterbank, dct_matrix, frame_signal, hamming_window,
    log_energies, power_spectrum, pre_emphasize, FeatureError, FftPlan, MelFilterBank, MfccConfig,
};
use crate::audio::AudioClip;
use crate::Matrix;

/// `T × C` cepstral coefficients for one clip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSequence {
    pub coeffs: Matrix,
    pub config_used: MfccConfig,
    pub source_path: String,
}

impl FeatureSequence {
    pub fn n_frames(&self) -> usize {
        self.coeffs.rows()
    }

    pub fn n_coeffs(&self) -> usize {
        self.coeffs.cols()
    }
}

/// Everything that depends only on the configuration and the sample rate,
/// built once and reused across clips.
#[derive(Debug, Clone)]
pub struct MfccExtractor {
    config: MfccConfig,
    sample_rate_hz: u32,
    window: Vec<f64>,
    plan: FftPlan,
    bank: MelFilterBank,
    dct: Matrix,
}

impl MfccExtractor {
    pub fn new(config: MfccConfig, sample_rate_hz: u32) -> Result<Self, FeatureError> {
        config.validate(sample_rate_hz)?;
        let window = hamming_window(config.frame_len_samples(sample_rate_hz), config.hamming_a);
        let plan = FftPlan::new(config.fft_size)?;
        let bank = build_mel_filterbank(&config, sample_rate_hz)?;
        let dct = dct_matrix(config.n_mel_filters, config.n_cepstral)?;
        Ok(Self {
            config,
            sample_rate_hz,
            window,
            plan,
            bank,
            dct,
        })
    }

    pub fn config(&self) -> &MfccConfig {
        &self.config
    }

    pub fn sample_rate_hz(&self) -> u32 {
        self.sample_rate_hz
    }

    pub fn filterbank(&self) -> &MelFilterBank {
        &self.bank
    }

    /// Runs the full pipeline on raw samples recorded at this extractor's rate.
    pub fn extract_samples(&self, samples: &[f64]) -> Result<Matrix, FeatureError> {
        let emphasized = pre_emphasize(samples, self.config.pre_emphasis_alpha)?;
        let frames = frame_signal(&emphasized, self.sample_rate_hz, &self.config)?;
        let mut coeffs = Matrix::zeros(frames.frames.rows(), self.config.n_cepstral);
        let mut windowed = vec![0.0; self.window.len()];
        for t in 0..frames.frames.rows() {
            for ((o, x), w) in windowed.iter_mut().zip(frames.frames.row(t)).zip(&self.window) {
                *o = x * w;
            }
            let spectrum = self.plan.transform_real(&windowed)?;
            let power = power_spectrum(&spectrum);
            let energies = apply_filterbank(&power, &self.bank)?;
            let logs = log_energies(&energies, self.config.log_floor);
            self.dct.matvec_into(&logs, coeffs.row_mut(t));
        }
        Ok(coeffs)
    }

    pub fn extract(&self, clip: &AudioClip) -> Result<FeatureSequence, FeatureError> {
        if clip.sample_rate_hz() != self.sample_rate_hz {
            return Err(FeatureError::BadConfig(format!(
                "extractor built for {} Hz, clip is {} Hz",
                self.sample_rate_hz,
                clip.sample_rate_hz()
            )));
        }
        Ok(FeatureSequence {
            coeffs: self.extract_samples(clip.samples())?,
            config_used: self.config.clone(),
            source_path: clip.source_path().to_string(),
        })
    }
}

/// Pre-emphasis → framing → Hamming window → zero-padded FFT → power
/// spectrum → Mel filterbank → log → DCT-II, one coefficient row per frame.
pub fn extract_mfcc(clip: &AudioClip, config: &MfccConfig) -> Result<FeatureSequence, FeatureError> {
    MfccExtractor::new(config.clone(), clip.sample_rate_hz())?.extract(clip)
}

use serde::{Deserialize, Serialize};

use super::FeatureError;

pub const DEFAULT_FRAME_LEN_MS: f64 = 32.0;

/// Parameters of the MFCC pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MfccConfig {
    pub pre_emphasis_alpha: f64,
    pub frame_len_ms: f64,
    pub hop_len_ms: f64,
    pub fft_size: usize,
    pub n_mel_filters: usize,
    pub n_cepstral: usize,
    /// Hamming coefficient `a` in `a - (1 - a)·cos(2πn/(N-1))`.
    pub hamming_a: f64,
    /// Multiplier in `mel = c·log10(1 + f/700)`.
    pub mel_constant: f64,
    pub low_freq_hz: f64,
    /// Upper filterbank edge; `None` means the Nyquist frequency.
    pub high_freq_hz: Option<f64>,
    pub log_floor: f64,
}

impl Default for MfccConfig {
    fn default() -> Self {
        Self {
            pre_emphasis_alpha: 0.97,
            frame_len_ms: DEFAULT_FRAME_LEN_MS,
            hop_len_ms: 10.0,
            fft_size: 512,
            n_mel_filters: 40,
            n_cepstral: 13,
            hamming_a: 0.54,
            mel_constant: 2595.0,
            low_freq_hz: 0.0,
            high_freq_hz: None,
            log_floor: super::DEFAULT_LOG_FLOOR,
        }
    }
}

fn ms_to_samples(ms: f64, rate: u32) -> usize {
    (ms / 1000.0 * f64::from(rate)).round() as usize
}

impl MfccConfig {
    pub fn frame_len_samples(&self, sample_rate_hz: u32) -> usize {
        ms_to_samples(self.frame_len_ms, sample_rate_hz)
    }

    pub fn hop_len_samples(&self, sample_rate_hz: u32) -> usize {
        ms_to_samples(self.hop_len_ms, sample_rate_hz)
    }

    pub fn high_freq(&self, sample_rate_hz: u32) -> f64 {
        self.high_freq_hz.unwrap_or(f64::from(sample_rate_hz) / 2.0)
    }

    /// Checks every invariant that depends on the sample rate.
    pub fn validate(&self, sample_rate_hz: u32) -> Result<(), FeatureError> {
        let bad = |m: String| Err(FeatureError::BadConfig(m));
        if sample_rate_hz == 0 {
            return bad("sample rate must be positive".into());
        }
        if !(0.0..1.0).contains(&self.pre_emphasis_alpha) {
            return bad(format!("pre_emphasis_alpha {} not in [0, 1)", self.pre_emphasis_alpha));
        }
        let frame = self.frame_len_samples(sample_rate_hz);
        let hop = self.hop_len_samples(sample_rate_hz);
        if frame == 0 || hop == 0 {
            return bad(format!("frame ({frame}) and hop ({hop}) must be at least one sample"));
        }
        if !self.fft_size.is_power_of_two() {
            return Err(FeatureError::NotPowerOfTwo(self.fft_size));
        }
        if self.fft_size < frame {
            return bad(format!("fft_size {} smaller than frame length {frame}", self.fft_size));
        }
        if self.n_mel_filters == 0 || self.n_cepstral == 0 {
            return bad("n_mel_filters and n_cepstral must be positive".into());
        }
        if self.n_cepstral > self.n_mel_filters {
            return Err(FeatureError::BadCoefficientCount {
                requested: self.n_cepstral,
                available: self.n_mel_filters,
            });
        }
        let nyquist = f64::from(sample_rate_hz) / 2.0;
        let high = self.high_freq(sample_rate_hz);
        if !(self.low_freq_hz >= 0.0 && self.low_freq_hz < high && high <= nyquist) {
            return bad(format!(
                "need 0 <= low ({}) < high ({high}) <= rate/2 ({nyquist})",
                self.low_freq_hz
            ));
        }
        if !(self.log_floor > 0.0) {
            return bad(format!("log_floor {} must be positive", self.log_floor));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_at_11025() {
        let c = MfccConfig::default();
        assert_eq!(c.frame_len_samples(11025), 353);
        assert_eq!(c.hop_len_samples(11025), 110);
        c.validate(11025).unwrap();
    }

    #[test]
    fn invariants_enforced() {
        let c = MfccConfig {
            fft_size: 256,
            ..Default::default()
        };
        assert!(matches!(c.validate(11025), Err(FeatureError::BadConfig(_))));
        let c = MfccConfig {
            n_cepstral: 41,
            ..Default::default()
        };
        assert!(matches!(c.validate(11025), Err(FeatureError::BadCoefficientCount { .. })));
        let c = MfccConfig {
            high_freq_hz: Some(6000.0),
            ..Default::default()
        };
        assert!(c.validate(11025).is_err());
        let c = MfccConfig {
            hop_len_ms: 0.01,
            ..Default::default()
        };
        assert!(c.validate(11025).is_err());
    }
}

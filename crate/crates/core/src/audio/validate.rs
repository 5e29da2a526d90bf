use std::fmt;

use super::AudioClip;
use crate::features::DEFAULT_FRAME_LEN_MS;

/// Full-scale magnitude of a 16-bit sample after scaling.
const FULL_SCALE: f64 = 32767.0 / 32768.0;
const CLIP_RUN: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum ClipWarning {
    RateMismatch { expected_hz: u32, actual_hz: u32 },
    TooShort { samples: usize, frame_samples: usize },
    Clipping { first_sample: usize, run_len: usize },
}

impl fmt::Display for ClipWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClipWarning::RateMismatch { expected_hz, actual_hz } => {
                write!(f, "sample rate {actual_hz} Hz, expected {expected_hz} Hz")
            }
            ClipWarning::TooShort { samples, frame_samples } => {
                write!(f, "{samples} samples is shorter than one {frame_samples}-sample frame")
            }
            ClipWarning::Clipping { first_sample, run_len } => {
                write!(f, "{run_len} consecutive full-scale samples starting at {first_sample}")
            }
        }
    }
}

/// Checks a clip against the expected rate using the default analysis frame length.
pub fn validate_clip(clip: &AudioClip, expected_rate_hz: u32) -> Vec<ClipWarning> {
    validate_clip_with_frame(clip, expected_rate_hz, DEFAULT_FRAME_LEN_MS)
}

pub fn validate_clip_with_frame(
    clip: &AudioClip,
    expected_rate_hz: u32,
    frame_len_ms: f64,
) -> Vec<ClipWarning> {
    let mut warnings = Vec::new();
    if clip.sample_rate_hz() != expected_rate_hz {
        warnings.push(ClipWarning::RateMismatch {
            expected_hz: expected_rate_hz,
            actual_hz: clip.sample_rate_hz(),
        });
    }
    let frame_samples = (frame_len_ms / 1000.0 * f64::from(clip.sample_rate_hz())).round() as usize;
    if clip.samples().len() < frame_samples {
        warnings.push(ClipWarning::TooShort {
            samples: clip.samples().len(),
            frame_samples,
        });
    }
    // report the first offending run only
    let samples = clip.samples();
    let mut i = 0;
    while i < samples.len() {
        if samples[i].abs() < FULL_SCALE {
            i += 1;
            continue;
        }
        let start = i;
        while i < samples.len() && samples[i].abs() >= FULL_SCALE {
            i += 1;
        }
        if i - start >= CLIP_RUN {
            warnings.push(ClipWarning::Clipping {
                first_sample: start,
                run_len: i - start,
            });
            break;
        }
    }
    warnings
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clip(n: usize, rate: u32) -> AudioClip {
        AudioClip::new(vec![0.1; n], rate, "t.wav").unwrap()
    }

    #[test]
    fn matching_rate_is_clean() {
        assert!(validate_clip(&clip(11025, 11025), 11025).is_empty());
    }

    #[test]
    fn rate_mismatch_warns_once() {
        let w = validate_clip(&clip(8000, 8000), 11025);
        assert_eq!(
            w,
            vec![ClipWarning::RateMismatch { expected_hz: 11025, actual_hz: 8000 }]
        );
    }

    #[test]
    fn short_clip_warns() {
        // round(0.032 * 11025) = 353
        let w = validate_clip(&clip(100, 11025), 11025);
        assert_eq!(w, vec![ClipWarning::TooShort { samples: 100, frame_samples: 353 }]);
    }

    #[test]
    fn clipping_run_detected() {
        let mut s = vec![0.0; 1000];
        s[10..14].copy_from_slice(&[1.0, -1.0, 32767.0 / 32768.0, 1.0]);
        let c = AudioClip::new(s, 11025, "c.wav").unwrap();
        let w = validate_clip(&c, 11025);
        assert_eq!(w, vec![ClipWarning::Clipping { first_sample: 10, run_len: 4 }]);
        // two full-scale samples are not a clipping run
        let mut s = vec![0.0; 1000];
        s[5] = 1.0;
        s[6] = 1.0;
        assert!(validate_clip(&AudioClip::new(s, 11025, "c").unwrap(), 11025).is_empty());
    }

    #[test]
    fn pure() {
        let c = clip(50, 8000);
        assert_eq!(validate_clip(&c, 11025), validate_clip(&c, 11025));
    }
}

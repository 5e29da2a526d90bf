//! Decoding recitation clips and loading labelled dataset manifests.

mod manifest;
mod validate;
mod wav;

use std::path::PathBuf;

use thiserror::Error;

pub use manifest::{load_manifest, parse_manifest, Dataset, LabeledExample, ManifestRow, MANIFEST_HEADER};
pub use validate::{validate_clip, ClipWarning};
pub use wav::{decode_wav, encode_wav_pcm16, load_wav, pcm16_to_amplitude};

#[derive(Debug, Error)]
pub enum AudioError {
    #[error("file not found: {0}")]
    NotFound(PathBuf),
    #[error("i/o error reading {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed RIFF/WAVE container ({field}): {detail}")]
    MalformedContainer { field: &'static str, detail: String },
    #[error("unsupported WAV format: {field} = {value}")]
    UnsupportedFormat { field: &'static str, value: u32 },
    #[error("invalid clip: {0}")]
    InvalidClip(String),
    #[error("manifest is missing column `{0}`")]
    MissingColumn(String),
    #[error("manifest row {row}: bad label value `{value}` in column `{column}`")]
    BadLabelValue {
        row: usize,
        column: &'static str,
        value: String,
    },
    #[error("manifest row {row}: clip {path} does not exist")]
    MissingFile { row: usize, path: PathBuf },
    #[error("manifest row {row}: clip {path} failed to decode: {source}")]
    UndecodableClip {
        row: usize,
        path: PathBuf,
        #[source]
        source: Box<AudioError>,
    },
}

/// A decoded mono waveform.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioClip {
    samples: Vec<f64>,
    sample_rate_hz: u32,
    source_path: String,
}

impl AudioClip {
    /// Checks the clip invariants: non-empty, amplitudes in `[-1, 1]`, positive rate.
    pub fn new(
        samples: Vec<f64>,
        sample_rate_hz: u32,
        source_path: impl Into<String>,
    ) -> Result<Self, AudioError> {
        if samples.is_empty() {
            return Err(AudioError::InvalidClip("no samples".into()));
        }
        if sample_rate_hz == 0 {
            return Err(AudioError::InvalidClip("sample rate must be positive".into()));
        }
        if let Some(i) = samples.iter().position(|s| !(-1.0..=1.0).contains(s)) {
            return Err(AudioError::InvalidClip(format!(
                "sample {i} = {} outside [-1, 1]",
                samples[i]
            )));
        }
        Ok(Self {
            samples,
            sample_rate_hz,
            source_path: source_path.into(),
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate_hz(&self) -> u32 {
        self.sample_rate_hz
    }

    pub fn source_path(&self) -> &str {
        &self.source_path
    }

    pub fn duration_secs(&self) -> f64 {
        self.samples.len() as f64 / f64::from(self.sample_rate_hz)
    }
}

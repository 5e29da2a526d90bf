//! MFCC feature extraction: pre-emphasis, framing, Hamming window, FFT, power
//! spectrum, triangular Mel filterbank, log compression and DCT-II.

mod cepstrum;
mod config;
mod fft;
mod framing;
mod io;
mod mel;
mod mfcc;
mod normalize;

use thiserror::Error;

pub use cepstrum::{dct, dct_matrix, log_energies, DEFAULT_LOG_FLOOR};
pub use config::{MfccConfig, DEFAULT_FRAME_LEN_MS};
pub use fft::{dft_naive, fft, FftPlan};
pub use framing::{
    apply_window, frame_signal, hamming_window, power_spectrum, pre_emphasize, FrameMatrix,
};
pub use io::{read_feature_file, read_features, write_feature_file, write_features, FEATURE_FILE_VERSION};
pub use mel::{apply_filterbank, build_mel_filterbank, hz_to_mel, mel_to_hz, MelFilterBank};
pub use mfcc::{extract_mfcc, FeatureSequence, MfccExtractor};
pub use normalize::{normalize_features, NormStats, STD_FLOOR};

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("empty input signal")]
    EmptyInput,
    #[error("bad MFCC configuration: {0}")]
    BadConfig(String),
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("FFT length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("negative frequency {0} Hz")]
    NegativeFrequency(f64),
    #[error("mel filter {filter} collapses onto FFT bin {bin}; increase fft_size or reduce n_mel_filters")]
    DegenerateFilter { filter: usize, bin: usize },
    #[error("cannot keep {requested} cepstral coefficients from {available} filter energies")]
    BadCoefficientCount { requested: usize, available: usize },
    #[error("feature file i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad feature file: {0}")]
    BadFeatureFile(String),
}

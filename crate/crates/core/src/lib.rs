//! Tajweed mispronunciation detection from recorded recitations.
//!
//! The crate covers the whole path from a 16-bit mono WAV file to a per-rule
//! verdict:
//!
//! * [`audio`] decodes RIFF/WAVE clips and loads labelled dataset manifests.
//! * [`features`] turns a clip into a sequence of MFCC vectors.
//! * [`model`] is the stacked-LSTM classifier with one sigmoid head per rule,
//!   trained with backpropagation through time and RMSprop.
//! * [`baselines`] holds the pooled-feature k-NN and logistic regression
//!   classifiers used for comparison.
//! * [`harness`] splits datasets, runs training, computes metrics and writes
//!   accuracy curves and comparison reports.

pub mod audio;
pub mod baselines;
pub mod features;
pub mod harness;
pub mod matrix;
pub mod model;
pub mod rules;

pub use matrix::Matrix;
pub use rules::{Labels, Rule, N_RULES};

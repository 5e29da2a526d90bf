//! `tajweed`: feature extraction, training, evaluation and prediction for
//! three Tajweed rules.

mod commands;
mod data;
mod run_manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "tajweed", version, about = "Tajweed mispronunciation detection with MFCC features and an LSTM")]
struct Cli {
    /// Only log warnings and errors.
    #[arg(short, long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Extract one MFCC feature file per manifest row.
    Features(FeaturesArgs),
    /// Train the LSTM on extracted features.
    Train(TrainArgs),
    /// Score a trained model, optionally against the baselines.
    Eval(EvalArgs),
    /// Print per-rule verdicts for WAV files.
    Predict(PredictArgs),
}

#[derive(Debug, Args)]
pub struct FeaturesArgs {
    /// Directory the manifest's clip paths are relative to.
    #[arg(long)]
    pub data_dir: PathBuf,
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// JSON file with MFCC settings; missing fields take defaults.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Clips at any other rate are skipped.
    #[arg(long, default_value_t = 11025)]
    pub sample_rate: u32,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Output directory of a previous `features` run.
    #[arg(long)]
    pub features_dir: PathBuf,
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Model path; defaults to `model.tjwd` inside the output directory.
    #[arg(long)]
    pub model_out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub batch: Option<usize>,
    /// JSON file with `model` and `train` sections; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub features_dir: PathBuf,
    #[arg(long)]
    pub manifest: PathBuf,
    /// `run.json` of the training run; restricts scoring to its test split.
    #[arg(long)]
    pub run: Option<PathBuf>,
    /// Also train and score k-NN and logistic regression on the same split.
    #[arg(long, requires = "run")]
    pub baselines: bool,
    #[arg(long, default_value_t = tajweed_core::baselines::DEFAULT_K)]
    pub k: usize,
    /// Where to write `report.txt` and `run.json`.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(required = true)]
    pub wavs: Vec<PathBuf>,
}

/// Outcome of a command that did not hit a fatal error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    Partial,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::new()
        .filter_level(if cli.quiet { log::LevelFilter::Warn } else { log::LevelFilter::Info })
        .format_timestamp(None)
        .init();
    let result = match &cli.command {
        Command::Features(a) => commands::features::run(a),
        Command::Train(a) => commands::train::run(a),
        Command::Eval(a) => commands::eval::run(a),
        Command::Predict(a) => commands::predict::run(a),
    };
    match result {
        Ok(Status::Success) => ExitCode::SUCCESS,
        Ok(Status::Partial) => ExitCode::from(2),
        Err(e) => {
            log::error!("{e:#}");
            ExitCode::from(1)
        }
    }
}

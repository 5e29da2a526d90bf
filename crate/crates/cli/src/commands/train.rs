use std::fs;
use std::path::Path;

use anyhow::{bail, Context};
use log::info;
use serde::Deserialize;
use tajweed_core::features::MfccConfig;
use tajweed_core::harness::{emit_curves, fit_normalization, split_indices, train_with_observer, Sample, TrainConfig};
use tajweed_core::model::{save_model, ModelConfig};
use tajweed_core::Labels;

use crate::data::{load_samples, read_manifest};
use crate::run_manifest::{ConfigSnapshot, RunManifest, SplitRecord, RUN_FILE};
use crate::{Status, TrainArgs};

pub const MODEL_FILE: &str = "model.tjwd";
pub const CURVES_FILE: &str = "curves.csv";

#[derive(Debug, Default, Deserialize)]
#[serde(default)]
struct TrainFileConfig {
    model: ModelConfig,
    train: TrainConfig,
}

/// MFCC settings recorded by the `features` run, if its manifest is present.
fn features_config(features_dir: &Path) -> anyhow::Result<MfccConfig> {
    let path = features_dir.join(RUN_FILE);
    if !path.exists() {
        return Ok(MfccConfig::default());
    }
    Ok(RunManifest::load(&path)?.config.mfcc.unwrap_or_default())
}

pub fn run(args: &TrainArgs) -> anyhow::Result<Status> {
    let TrainFileConfig { mut model, mut train } = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => TrainFileConfig::default(),
    };
    if let Some(seed) = args.seed {
        train.seed = seed;
        model.seed = seed;
    }
    if let Some(epochs) = args.epochs {
        train.epochs = epochs;
    }
    if let Some(batch) = args.batch {
        train.batch_size = batch;
    }
    train.validate()?;
    model.validate()?;
    let mfcc = features_config(&args.features_dir)?;

    let rows = read_manifest(&args.manifest, &args.features_dir)?;
    let samples = load_samples(&args.features_dir, &rows)?;
    if let Some(s) = samples.first() {
        if s.features.cols() != model.input_dim {
            bail!("features have {} coefficients but the model expects input_dim {}", s.features.cols(), model.input_dim);
        }
    }
    if mfcc.n_cepstral != model.input_dim {
        bail!("features run used {} coefficients but the model expects input_dim {}", mfcc.n_cepstral, model.input_dim);
    }

    let labels: Vec<Labels> = samples.iter().map(|s| s.labels).collect();
    let (train_idx, test_idx) = split_indices(&labels, &train)?;
    let pick = |idx: &[usize]| idx.iter().map(|&i| samples[i].clone()).collect::<Vec<Sample>>();
    let (mut train_set, mut test_set) = (pick(&train_idx), pick(&test_idx));
    let stats = fit_normalization(&mut train_set, &mut test_set).context("empty training split")?;
    info!("{} train / {} test examples", train_set.len(), test_set.len());

    let mut run = RunManifest::start(
        "train",
        ConfigSnapshot {
            mfcc: Some(mfcc.clone()),
            model: Some(model.clone()),
            train: Some(train.clone()),
            baselines: None,
        },
    );
    run.input("features_dir", &args.features_dir);
    run.input("manifest", &args.manifest);
    run.seeds.insert("split_and_batches".into(), train.seed);
    run.seeds.insert("init".into(), model.seed);

    let outcome = train_with_observer(&train_set, &test_set, &model, &train, |p| {
        info!(
            "epoch {:>4}  loss {:.6}  train acc {:.4?}  test acc {:.4?}",
            p.epoch, p.train_loss, p.train_accuracy, p.test_accuracy
        );
        true
    })?;
    let mut params = outcome.params;
    params.norm_stats = stats;
    params.feature_config = mfcc;

    fs::create_dir_all(&args.out_dir).with_context(|| format!("creating {}", args.out_dir.display()))?;
    let model_path = args.model_out.clone().unwrap_or_else(|| args.out_dir.join(MODEL_FILE));
    save_model(&params, &model, &model_path).with_context(|| format!("writing {}", model_path.display()))?;
    let curves_path = args.out_dir.join(CURVES_FILE);
    emit_curves(&outcome.curve, &curves_path)?;

    run.outputs = vec![model_path.display().to_string(), curves_path.display().to_string()];
    run.split = Some(SplitRecord {
        train: train_set.iter().map(|s| s.id.clone()).collect(),
        test: test_set.iter().map(|s| s.id.clone()).collect(),
    });
    run.inputs.insert("selected_epoch".into(), outcome.selected_epoch.to_string());
    run.finish(&args.out_dir)?;
    info!("model written to {}", model_path.display());
    Ok(Status::Success)
}

use std::fs;

use anyhow::Context;
use log::{info, warn};
use tajweed_core::audio::{load_wav, validate_clip, ClipWarning};
use tajweed_core::features::{write_feature_file, MfccConfig, MfccExtractor};

use crate::data::{feature_path, read_manifest};
use crate::run_manifest::{ConfigSnapshot, FailedInput, RunManifest};
use crate::{FeaturesArgs, Status};

pub fn run(args: &FeaturesArgs) -> anyhow::Result<Status> {
    let config: MfccConfig = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => MfccConfig::default(),
    };
    let extractor = MfccExtractor::new(config.clone(), args.sample_rate)?;
    let rows = read_manifest(&args.manifest, &args.data_dir)?;
    fs::create_dir_all(&args.out_dir).with_context(|| format!("creating {}", args.out_dir.display()))?;

    let mut run = RunManifest::start("features", ConfigSnapshot { mfcc: Some(config), ..Default::default() });
    run.input("data_dir", &args.data_dir);
    run.input("manifest", &args.manifest);
    run.inputs.insert("sample_rate_hz".into(), args.sample_rate.to_string());

    for row in &rows {
        let result = load_wav(&row.path).map_err(anyhow::Error::from).and_then(|clip| {
            let mut fatal = Vec::new();
            for w in validate_clip(&clip, args.sample_rate) {
                match w {
                    ClipWarning::Clipping { .. } => warn!("{}: {w}", row.rel_path),
                    _ => fatal.push(w.to_string()),
                }
            }
            if !fatal.is_empty() {
                anyhow::bail!("{}", fatal.join("; "));
            }
            let seq = extractor.extract(&clip)?;
            let out = feature_path(&args.out_dir, row);
            write_feature_file(&out, &seq.coeffs)?;
            Ok(out)
        });
        match result {
            Ok(out) => {
                info!("{} -> {}", row.rel_path, out.display());
                run.outputs.push(out.file_name().unwrap().to_string_lossy().into_owned());
            }
            Err(e) => {
                warn!("skipping {}: {e:#}", row.path.display());
                run.failures.push(FailedInput { path: row.rel_path.clone(), error: format!("{e:#}") });
            }
        }
    }
    run.finish(&args.out_dir)?;
    info!("{} of {} clips extracted", run.outputs.len(), rows.len());
    Ok(if run.failures.is_empty() { Status::Success } else { Status::Partial })
}

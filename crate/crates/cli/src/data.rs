//! Locating and loading the feature files that belong to a manifest.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use tajweed_core::audio::{parse_manifest, ManifestRow};
use tajweed_core::features::read_feature_file;
use tajweed_core::harness::Sample;

pub const FEATURE_EXT: &str = "mfcc";

/// `speaker1/clip 3.wav` → `speaker1__clip 3.mfcc`.
pub fn feature_file_name(rel_path: &str) -> String {
    let flat = rel_path.replace(['/', '\\'], "__");
    let stem = match flat.rfind('.') {
        Some(dot) if dot > 0 && !flat[dot..].contains("__") => &flat[..dot],
        _ => &flat,
    };
    format!("{stem}.{FEATURE_EXT}")
}

pub fn read_manifest(path: &Path, root: &Path) -> anyhow::Result<Vec<ManifestRow>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading manifest {}", path.display()))?;
    parse_manifest(&text, root).with_context(|| format!("parsing manifest {}", path.display()))
}

pub fn feature_path(features_dir: &Path, row: &ManifestRow) -> PathBuf {
    features_dir.join(feature_file_name(&row.rel_path))
}

/// Raw (unnormalized) samples for every manifest row; all must be present
/// and share one coefficient count.
pub fn load_samples(features_dir: &Path, rows: &[ManifestRow]) -> anyhow::Result<Vec<Sample>> {
    let mut samples = Vec::with_capacity(rows.len());
    for row in rows {
        let path = feature_path(features_dir, row);
        let features = read_feature_file(&path)
            .with_context(|| format!("features for {} ({})", row.rel_path, path.display()))?;
        if let Some(first) = samples.first() {
            let first: &Sample = first;
            if first.features.cols() != features.cols() {
                bail!(
                    "{} has {} coefficients, {} has {}",
                    path.display(),
                    features.cols(),
                    first.id,
                    first.features.cols()
                );
            }
        }
        samples.push(Sample { id: row.rel_path.clone(), features, labels: row.labels });
    }
    Ok(samples)
}

//! Comma-separated dataset manifests: `path,madd_separate,tight_noon,hide`.

use std::path::{Path, PathBuf};

use super::{load_wav, AudioClip, AudioError};
use crate::rules::{Labels, Rule, N_RULES};

pub const MANIFEST_HEADER: [&str; 4] = ["path", "madd_separate", "tight_noon", "hide"];

/// One parsed manifest data row; the clip is not touched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestRow {
    /// Path as written in the manifest.
    pub rel_path: String,
    /// `rel_path` resolved against the root directory.
    pub path: PathBuf,
    pub labels: Labels,
}

#[derive(Debug, Clone)]
pub struct LabeledExample {
    pub row: ManifestRow,
    pub clip: AudioClip,
}

impl LabeledExample {
    pub fn labels(&self) -> Labels {
        self.row.labels
    }
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub examples: Vec<LabeledExample>,
    pub root_dir: PathBuf,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    /// Rules for which the dataset lacks either a correct or an incorrect example.
    pub fn single_class_rules(&self) -> Vec<Rule> {
        single_class_rules(self.examples.iter().map(|e| e.labels()))
    }
}

pub(crate) fn single_class_rules(labels: impl Iterator<Item = Labels>) -> Vec<Rule> {
    let mut seen = [[false; 2]; N_RULES];
    for l in labels {
        for (r, &v) in l.iter().enumerate() {
            seen[r][usize::from(v)] = true;
        }
    }
    Rule::ALL
        .into_iter()
        .filter(|r| !(seen[r.index()][0] && seen[r.index()][1]))
        .collect()
}

fn parse_label(cell: &str, row: usize, column: &'static str) -> Result<u8, AudioError> {
    match cell.trim() {
        "1" | "correct" => Ok(1),
        "0" | "incorrect" => Ok(0),
        other => Err(AudioError::BadLabelValue {
            row,
            column,
            value: other.to_string(),
        }),
    }
}

/// Parses manifest text. Row numbers in errors are 1-based file line numbers.
pub fn parse_manifest(text: &str, root_dir: impl AsRef<Path>) -> Result<Vec<ManifestRow>, AudioError> {
    let root_dir = root_dir.as_ref();
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut lines = text.lines().enumerate();
    let header: Vec<&str> = lines
        .next()
        .map(|(_, h)| h.split(',').map(str::trim).collect())
        .unwrap_or_default();
    for col in MANIFEST_HEADER {
        if !header.contains(&col) {
            return Err(AudioError::MissingColumn(col.to_string()));
        }
    }
    let idx = |name: &str| header.iter().position(|h| *h == name).unwrap();
    let path_col = idx("path");
    let label_cols: Vec<usize> = Rule::ALL.iter().map(|r| idx(r.column())).collect();

    let mut rows = Vec::new();
    for (i, line) in lines {
        let row_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        let cell = |c: usize, name: &str| {
            cells
                .get(c)
                .copied()
                .ok_or_else(|| AudioError::MissingColumn(format!("{name} (row {row_no})")))
        };
        let rel_path = cell(path_col, "path")?.trim().to_string();
        let mut labels = [0u8; N_RULES];
        for (rule, &c) in Rule::ALL.iter().zip(&label_cols) {
            labels[rule.index()] = parse_label(cell(c, rule.column())?, row_no, rule.column())?;
        }
        rows.push(ManifestRow {
            path: root_dir.join(&rel_path),
            rel_path,
            labels,
        });
    }
    Ok(rows)
}

/// Loads a manifest and decodes every clip it lists, preserving row order.
pub fn load_manifest(
    manifest_path: impl AsRef<Path>,
    root_dir: impl AsRef<Path>,
) -> Result<Dataset, AudioError> {
    let manifest_path = manifest_path.as_ref();
    let text = std::fs::read_to_string(manifest_path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => AudioError::NotFound(manifest_path.to_path_buf()),
        _ => AudioError::Io {
            path: manifest_path.to_path_buf(),
            source: e,
        },
    })?;
    let rows = parse_manifest(&text, root_dir.as_ref())?;
    let mut examples = Vec::with_capacity(rows.len());
    for (n, row) in rows.into_iter().enumerate() {
        let row_no = n + 2;
        if !row.path.exists() {
            return Err(AudioError::MissingFile {
                row: row_no,
                path: row.path,
            });
        }
        let clip = load_wav(&row.path).map_err(|e| AudioError::UndecodableClip {
            row: row_no,
            path: row.path.clone(),
            source: Box::new(e),
        })?;
        examples.push(LabeledExample { row, clip });
    }
    Ok(Dataset {
        examples,
        root_dir: root_dir.as_ref().to_path_buf(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "path,madd_separate,tight_noon,hide\n";

    #[test]
    fn numeric_labels() {
        let rows = parse_manifest(&format!("{HEADER}a.wav,1,0,1\n"), "/data").unwrap();
        assert_eq!(rows[0].labels, [1, 0, 1]);
        assert_eq!(rows[0].path, PathBuf::from("/data/a.wav"));
    }

    #[test]
    fn word_labels_and_crlf() {
        let text = "path,madd_separate,tight_noon,hide\r\na.wav,correct,incorrect,correct\r\n";
        let rows = parse_manifest(text, ".").unwrap();
        assert_eq!(rows[0].labels, [1, 0, 1]);
        assert_eq!(rows[0].rel_path, "a.wav");
    }

    #[test]
    fn missing_column() {
        let err = parse_manifest("path,madd_separate,hide\na,1,1\n", ".").unwrap_err();
        assert!(matches!(err, AudioError::MissingColumn(c) if c == "tight_noon"));
    }

    #[test]
    fn bad_label_reports_row() {
        let err = parse_manifest(&format!("{HEADER}a.wav,1,0,1\nb.wav,1,maybe,0\n"), ".").unwrap_err();
        assert!(matches!(
            err,
            AudioError::BadLabelValue { row: 3, column: "tight_noon", ref value } if value == "maybe"
        ));
    }

    #[test]
    fn row_count_and_order_preserved() {
        let mut text = HEADER.to_string();
        for i in 0..1500 {
            text.push_str(&format!("clip_{i}.wav,{},{},{}\n", i % 2, (i / 2) % 2, (i / 4) % 2));
        }
        let rows = parse_manifest(&text, ".").unwrap();
        assert_eq!(rows.len(), 1500);
        assert!(rows.iter().enumerate().all(|(i, r)| r.rel_path == format!("clip_{i}.wav")));
    }

    #[test]
    fn single_class_detection() {
        let labels = [[1, 0, 1], [1, 1, 0]];
        assert_eq!(single_class_rules(labels.into_iter()), vec![Rule::SeparateStretching]);
    }
}

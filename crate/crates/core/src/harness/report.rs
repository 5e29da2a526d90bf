use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{HarnessError, Metrics};
use crate::rules::{Rule, N_RULES};

/// Published accuracies for a model that this crate does not reimplement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedRow {
    pub name: &'static str,
    /// Per rule, in [`Rule::ALL`] order.
    pub accuracy: [f64; N_RULES],
}

pub const PUBLISHED_ROWS: [PublishedRow; 2] = [
    PublishedRow { name: "SVM", accuracy: [0.81, 0.85, 0.71] },
    PublishedRow { name: "Random Forest", accuracy: [0.91, 0.91, 0.83] },
];

/// Published LSTM targets: accuracy, recall, F1 per rule.
pub const PUBLISHED_LSTM: [[f64; N_RULES]; 3] = [
    [0.96, 0.96, 0.95],
    [0.95, 0.98, 0.95],
    [0.95, 0.97, 0.95],
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub seed: u64,
    pub config_hash: String,
    pub n_test: usize,
    pub knn_k: usize,
}

const NOT_REPRODUCED: &str = "paper-reported, not reproduced";

fn row(out: &mut String, name: &str, cells: [f64; N_RULES], note: &str) {
    let _ = write!(out, "{name:<22}");
    for v in cells {
        let _ = write!(out, "{v:>20.4}");
    }
    let _ = writeln!(out, "  {note}");
}

fn header(out: &mut String, first: &str) {
    let _ = write!(out, "{first:<22}");
    for r in Rule::ALL {
        let _ = write!(out, "{:>20}", r.display_name());
    }
    let _ = writeln!(out);
}

/// Renders the comparison table followed by the LSTM detail block.
pub fn render_report(lstm: &Metrics, knn: &Metrics, logreg: &Metrics, meta: &ReportMeta) -> String {
    let acc = |m: &Metrics| m.per_rule.map(|r| r.accuracy);
    let run = format!("seed={} config={}", meta.seed, meta.config_hash);

    let mut out = String::new();
    let _ = writeln!(out, "Accuracy by model and rule (test examples: {})", meta.n_test);
    let _ = writeln!(out);
    header(&mut out, "Model");
    row(&mut out, "LSTM", acc(lstm), &run);
    row(&mut out, &format!("KNN (k={})", meta.knn_k), acc(knn), &run);
    row(&mut out, "Logistic Regression", acc(logreg), &run);
    for p in PUBLISHED_ROWS {
        row(&mut out, p.name, p.accuracy, NOT_REPRODUCED);
    }

    let _ = writeln!(out);
    let _ = writeln!(out, "LSTM details, achieved vs published");
    let _ = writeln!(out);
    header(&mut out, "Metric");
    let achieved = [
        acc(lstm),
        lstm.per_rule.map(|r| r.recall),
        lstm.per_rule.map(|r| r.f1),
    ];
    for ((name, got), target) in ["Accuracy", "Recall", "F1"].iter().zip(achieved).zip(PUBLISHED_LSTM) {
        row(&mut out, name, got, "achieved");
        row(&mut out, name, target, "published");
    }
    out
}

pub fn compare_report(
    lstm: &Metrics,
    knn: &Metrics,
    logreg: &Metrics,
    meta: &ReportMeta,
    path: &Path,
) -> Result<(), HarnessError> {
    fs::write(path, render_report(lstm, knn, logreg, meta))?;
    Ok(())
}

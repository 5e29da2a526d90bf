use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::rules::N_RULES;

pub const CURVE_HEADER: &str =
    "epoch,train_loss,train_acc_madd,train_acc_noon,train_acc_hide,test_acc_madd,test_acc_noon,test_acc_hide";

/// One row of the accuracy curves, rules in [`crate::Rule::ALL`] order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub epoch: usize,
    pub train_loss: f64,
    pub train_accuracy: [f64; N_RULES],
    pub test_accuracy: [f64; N_RULES],
}

pub fn write_curves<W: Write>(points: &[CurvePoint], mut out: W) -> io::Result<()> {
    writeln!(out, "{CURVE_HEADER}")?;
    for p in points {
        write!(out, "{},{:.12}", p.epoch, p.train_loss)?;
        for v in p.train_accuracy.iter().chain(&p.test_accuracy) {
            write!(out, ",{v:.12}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Writes the curve file; an empty point list is rejected.
pub fn emit_curves(points: &[CurvePoint], path: &Path) -> Result<(), HarnessError> {
    if points.is_empty() {
        return Err(HarnessError::BadConfig("no curve points to write".into()));
    }
    let mut buf = Vec::new();
    write_curves(points, &mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

pub fn read_curves(path: &Path) -> Result<Vec<CurvePoint>, HarnessError> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == CURVE_HEADER => {}
        _ => {
            return Err(HarnessError::BadCurveFile {
                line: 1,
                detail: "missing or wrong header".into(),
            })
        }
    }
    let mut points = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |detail: String| HarnessError::BadCurveFile { line: i + 1, detail };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 2 + 2 * N_RULES {
            return Err(bad(format!("expected {} fields, got {}", 2 + 2 * N_RULES, fields.len())));
        }
        let epoch = fields[0].parse().map_err(|e| bad(format!("epoch: {e}")))?;
        let mut vals = [0.0; 1 + 2 * N_RULES];
        for (v, f) in vals.iter_mut().zip(&fields[1..]) {
            *v = f.parse().map_err(|e| bad(format!("{f:?}: {e}")))?;
        }
        points.push(CurvePoint {
            epoch,
            train_loss: vals[0],
            train_accuracy: std::array::from_fn(|r| vals[1 + r]),
            test_accuracy: std::array::from_fn(|r| vals[1 + N_RULES + r]),
        });
    }
    Ok(points)
}

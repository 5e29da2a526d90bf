//! Binary feature files: magic `MFCC`, u16 version, u32 frame and coefficient
//! counts, then `T × C` little-endian f64 values in row-major order.

use std::io::{Read, Write};
use std::path::Path;

use super::FeatureError;
use crate::Matrix;

const MAGIC: &[u8; 4] = b"MFCC";
pub const FEATURE_FILE_VERSION: u16 = 1;
const HEADER_LEN: usize = 4 + 2 + 4 + 4;

pub fn write_features(mut w: impl Write, coeffs: &Matrix) -> Result<(), FeatureError> {
    let dim = |n: usize| {
        u32::try_from(n).map_err(|_| FeatureError::BadFeatureFile(format!("dimension {n} exceeds u32")))
    };
    let mut buf = Vec::with_capacity(HEADER_LEN + coeffs.as_slice().len() * 8);
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&FEATURE_FILE_VERSION.to_le_bytes());
    buf.extend_from_slice(&dim(coeffs.rows())?.to_le_bytes());
    buf.extend_from_slice(&dim(coeffs.cols())?.to_le_bytes());
    for v in coeffs.as_slice() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_features(mut r: impl Read) -> Result<Matrix, FeatureError> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    let bad = |m: String| FeatureError::BadFeatureFile(m);
    if bytes.len() < HEADER_LEN {
        return Err(bad(format!("{} bytes is shorter than the header", bytes.len())));
    }
    if &bytes[..4] != MAGIC {
        return Err(bad("missing MFCC magic".into()));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != FEATURE_FILE_VERSION {
        return Err(bad(format!(
            "version {version}, expected {FEATURE_FILE_VERSION}"
        )));
    }
    let rows = u32::from_le_bytes(bytes[6..10].try_into().unwrap()) as usize;
    let cols = u32::from_le_bytes(bytes[10..14].try_into().unwrap()) as usize;
    let payload = &bytes[HEADER_LEN..];
    let expected = rows
        .checked_mul(cols)
        .and_then(|n| n.checked_mul(8))
        .ok_or_else(|| bad("dimensions overflow".into()))?;
    if payload.len() != expected {
        return Err(bad(format!(
            "{rows}x{cols} needs {expected} payload bytes, found {}",
            payload.len()
        )));
    }
    let data = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(Matrix::from_vec(rows, cols, data))
}

pub fn write_feature_file(path: impl AsRef<Path>, coeffs: &Matrix) -> Result<(), FeatureError> {
    let mut buf = Vec::new();
    write_features(&mut buf, coeffs)?;
    std::fs::write(path, buf)?;
    Ok(())
}

pub fn read_feature_file(path: impl AsRef<Path>) -> Result<Matrix, FeatureError> {
    read_features(std::fs::File::open(path)?)
}

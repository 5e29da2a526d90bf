//! Model files.
//!
//! ```text
//! "TJWD" | version: u16 | crc32: u32 | header_len: u32 | header (JSON) | payload
//! ```
//!
//! The CRC-32 covers everything after the checksum field. The payload holds
//! every weight tensor as little-endian f64 in declaration order.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ModelConfig, ModelError, ModelParams, Weights};
use crate::features::{MfccConfig, NormStats};

const MAGIC: &[u8; 4] = b"TJWD";
pub const MODEL_FORMAT_VERSION: u16 = 1;
const PREFIX_LEN: usize = 4 + 2 + 4;

#[derive(Serialize, Deserialize)]
struct Header {
    config: ModelConfig,
    feature_config: MfccConfig,
    norm_stats: NormStats,
    tensors: Vec<TensorShape>,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
struct TensorShape {
    name: String,
    rows: usize,
    cols: usize,
}

fn shapes_of(w: &Weights) -> Vec<TensorShape> {
    w.shapes()
        .into_iter()
        .map(|(name, rows, cols)| TensorShape { name, rows, cols })
        .collect()
}

pub fn write_model(
    mut out: impl Write,
    params: &ModelParams,
    config: &ModelConfig,
) -> Result<(), ModelError> {
    params.check_against(config)?;
    let header = Header {
        config: config.clone(),
        feature_config: params.feature_config.clone(),
        norm_stats: params.norm_stats.clone(),
        tensors: shapes_of(&params.weights),
    };
    let header = serde_json::to_vec(&header)
        .map_err(|e| ModelError::CorruptFile(format!("cannot encode header: {e}")))?;
    let header_len = u32::try_from(header.len())
        .map_err(|_| ModelError::CorruptFile("header too large".into()))?;

    let mut body = Vec::with_capacity(4 + header.len() + params.weights.n_params() * 8);
    body.extend_from_slice(&header_len.to_le_bytes());
    body.extend_from_slice(&header);
    for t in params.weights.tensors() {
        for v in t {
            body.extend_from_slice(&v.to_le_bytes());
        }
    }

    let mut file = Vec::with_capacity(PREFIX_LEN + body.len());
    file.extend_from_slice(MAGIC);
    file.extend_from_slice(&MODEL_FORMAT_VERSION.to_le_bytes());
    file.extend_from_slice(&crc32fast::hash(&body).to_le_bytes());
    file.extend_from_slice(&body);
    out.write_all(&file)?;
    Ok(())
}

pub fn read_model(mut input: impl Read) -> Result<(ModelParams, ModelConfig), ModelError> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    let corrupt = |m: String| ModelError::CorruptFile(m);
    if bytes.len() < PREFIX_LEN + 4 {
        return Err(corrupt(format!("{} bytes is shorter than the fixed header", bytes.len())));
    }
    if &bytes[..4] != MAGIC {
        return Err(corrupt("missing TJWD magic".into()));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != MODEL_FORMAT_VERSION {
        return Err(ModelError::VersionMismatch {
            found: version,
            expected: MODEL_FORMAT_VERSION,
        });
    }
    let stored_crc = u32::from_le_bytes(bytes[6..10].try_into().unwrap());
    let body = &bytes[PREFIX_LEN..];
    let actual_crc = crc32fast::hash(body);
    if stored_crc != actual_crc {
        return Err(corrupt(format!(
            "checksum mismatch: stored {stored_crc:08x}, computed {actual_crc:08x}"
        )));
    }

    let header_len = u32::from_le_bytes(body[..4].try_into().unwrap()) as usize;
    let header_bytes = body
        .get(4..4 + header_len)
        .ok_or_else(|| corrupt("header length exceeds file".into()))?;
    let header: Header = serde_json::from_slice(header_bytes)
        .map_err(|e| corrupt(format!("unreadable header: {e}")))?;
    header
        .config
        .validate()
        .map_err(|e| corrupt(format!("stored config invalid: {e}")))?;

    let mut weights = Weights::zeros(&header.config);
    if shapes_of(&weights) != header.tensors {
        return Err(corrupt("tensor table does not match the stored config".into()));
    }
    let payload = &body[4 + header_len..];
    if payload.len() != weights.n_params() * 8 {
        return Err(corrupt(format!(
            "payload has {} bytes, expected {}",
            payload.len(),
            weights.n_params() * 8
        )));
    }
    let mut values = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()));
    for t in weights.tensors_mut() {
        for (slot, v) in t.iter_mut().zip(&mut values) {
            *slot = v;
        }
    }
    let params = ModelParams::new(weights, header.norm_stats, header.feature_config);
    params
        .check_against(&header.config)
        .map_err(|e| corrupt(e.to_string()))?;
    Ok((params, header.config))
}

/// Writes to a sibling temporary file and renames it into place.
pub fn save_model(
    params: &ModelParams,
    config: &ModelConfig,
    path: impl AsRef<Path>,
) -> Result<(), ModelError> {
    let path = path.as_ref();
    let mut buf = Vec::new();
    write_model(&mut buf, params, config)?;
    let tmp = path.with_extension("tjwd.tmp");
    std::fs::write(&tmp, &buf)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<(ModelParams, ModelConfig), ModelError> {
    read_model(std::fs::File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::init_params;

    fn sample() -> (ModelParams, ModelConfig) {
        let cfg = ModelConfig {
            input_dim: 3,
            lstm_units: vec![4, 4],
            dense_units: vec![3, 2],
            seed: 99,
            ..Default::default()
        };
        let mut p = init_params(&cfg).unwrap();
        p.norm_stats = NormStats {
            mean: vec![0.1, -1.0 / 3.0, 7.25],
            std: vec![1e-8, 2.0f64.sqrt(), 1.0 / 7.0],
        };
        (p, cfg)
    }

    fn encode(p: &ModelParams, c: &ModelConfig) -> Vec<u8> {
        let mut buf = Vec::new();
        write_model(&mut buf, p, c).unwrap();
        buf
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let (p, c) = sample();
        let first = encode(&p, &c);
        let (p2, c2) = read_model(&first[..]).unwrap();
        assert_eq!(c2, c);
        assert_eq!(p2.norm_stats, p.norm_stats);
        for (a, b) in p.weights.tensors().iter().zip(p2.weights.tensors()) {
            assert!(a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits()));
        }
        assert_eq!(encode(&p2, &c2), first);
    }

    #[test]
    fn truncation_detected() {
        let (p, c) = sample();
        let buf = encode(&p, &c);
        for cut in [buf.len() - 1, buf.len() / 2, 12, 3] {
            assert!(matches!(read_model(&buf[..cut]), Err(ModelError::CorruptFile(_))), "cut {cut}");
        }
    }

    #[test]
    fn bit_flip_detected() {
        let (p, c) = sample();
        let mut buf = encode(&p, &c);
        let last = buf.len() - 1;
        buf[last] ^= 0x10;
        assert!(matches!(read_model(&buf[..]), Err(ModelError::CorruptFile(m)) if m.contains("checksum")));
    }

    #[test]
    fn version_mismatch_names_both() {
        let (p, c) = sample();
        let mut buf = encode(&p, &c);
        buf[4..6].copy_from_slice(&7u16.to_le_bytes());
        let err = read_model(&buf[..]).unwrap_err();
        assert!(matches!(err, ModelError::VersionMismatch { found: 7, expected: 1 }));
        let msg = err.to_string();
        assert!(msg.contains('7') && msg.contains('1'));
    }

    #[test]
    fn file_round_trip() {
        let (p, c) = sample();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.tjwd");
        save_model(&p, &c, &path).unwrap();
        let first = std::fs::read(&path).unwrap();
        let (p2, c2) = load_model(&path).unwrap();
        save_model(&p2, &c2, &path).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), first);
    }
}

//! RIFF/WAVE reader for 16-bit PCM mono files.

use std::path::Path;

use super::{AudioClip, AudioError};

const PCM_FORMAT: u16 = 1;

/// Maps a signed 16-bit sample onto `[-1, 1)`; `-32768` maps to `-1.0` exactly.
#[inline]
pub fn pcm16_to_amplitude(v: i16) -> f64 {
    f64::from(v) / 32768.0
}

pub fn load_wav(path: impl AsRef<Path>) -> Result<AudioClip, AudioError> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => AudioError::NotFound(path.to_path_buf()),
        _ => AudioError::Io {
            path: path.to_path_buf(),
            source: e,
        },
    })?;
    let (rate, pcm) = decode_wav(&bytes)?;
    let samples = pcm.into_iter().map(pcm16_to_amplitude).collect();
    AudioClip::new(samples, rate, path.to_string_lossy())
}

fn read_u16(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn read_u32(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

fn malformed(field: &'static str, detail: impl Into<String>) -> AudioError {
    AudioError::MalformedContainer {
        field,
        detail: detail.into(),
    }
}

/// Parses a WAV byte buffer into its sample rate and raw 16-bit samples.
///
/// Chunks other than `fmt ` and `data` are skipped.
pub fn decode_wav(bytes: &[u8]) -> Result<(u32, Vec<i16>), AudioError> {
    if bytes.len() < 12 {
        return Err(malformed("RIFF header", format!("only {} bytes", bytes.len())));
    }
    if &bytes[0..4] != b"RIFF" {
        return Err(malformed("ChunkID", "expected `RIFF`"));
    }
    if &bytes[8..12] != b"WAVE" {
        return Err(malformed("Format", "expected `WAVE`"));
    }

    let mut fmt: Option<(u32, u16)> = None;
    let mut data: Option<&[u8]> = None;
    let mut pos = 12;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = read_u32(bytes, pos + 4) as usize;
        let body_start = pos + 8;
        let body_end = body_start
            .checked_add(size)
            .filter(|&e| e <= bytes.len())
            .ok_or_else(|| {
                malformed(
                    "chunk size",
                    format!(
                        "chunk `{}` declares {size} bytes but only {} remain",
                        String::from_utf8_lossy(id),
                        bytes.len() - body_start
                    ),
                )
            })?;
        let body = &bytes[body_start..body_end];
        match id {
            b"fmt " => {
                if body.len() < 16 {
                    return Err(malformed("fmt chunk", format!("{} bytes, need 16", body.len())));
                }
                let format_code = read_u16(body, 0);
                let channels = read_u16(body, 2);
                let rate = read_u32(body, 4);
                let bits = read_u16(body, 14);
                if format_code != PCM_FORMAT {
                    return Err(AudioError::UnsupportedFormat {
                        field: "AudioFormat",
                        value: u32::from(format_code),
                    });
                }
                if channels != 1 {
                    return Err(AudioError::UnsupportedFormat {
                        field: "NumChannels",
                        value: u32::from(channels),
                    });
                }
                if bits != 16 {
                    return Err(AudioError::UnsupportedFormat {
                        field: "BitsPerSample",
                        value: u32::from(bits),
                    });
                }
                if rate == 0 {
                    return Err(AudioError::UnsupportedFormat {
                        field: "SampleRate",
                        value: 0,
                    });
                }
                fmt = Some((rate, bits));
            }
            b"data" => data = Some(body),
            _ => {}
        }
        // chunks are word aligned
        pos = body_end + (size & 1);
    }

    let (rate, _) = fmt.ok_or_else(|| malformed("fmt chunk", "missing"))?;
    let data = data.ok_or_else(|| malformed("data chunk", "missing"))?;
    if data.len() % 2 != 0 {
        return Err(malformed("data chunk", "odd byte count for 16-bit samples"));
    }
    if data.is_empty() {
        return Err(malformed("data chunk", "no samples"));
    }
    let samples = data
        .chunks_exact(2)
        .map(|c| i16::from_le_bytes([c[0], c[1]]))
        .collect();
    Ok((rate, samples))
}

/// Encodes raw 16-bit samples as a canonical 44-byte-header mono PCM WAV.
pub fn encode_wav_pcm16(samples: &[i16], sample_rate_hz: u32) -> Vec<u8> {
    let data_len = (samples.len() * 2) as u32;
    let mut out = Vec::with_capacity(44 + data_len as usize);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&PCM_FORMAT.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&sample_rate_hz.to_le_bytes());
    out.extend_from_slice(&(sample_rate_hz * 2).to_le_bytes());
    out.extend_from_slice(&2u16.to_le_bytes());
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());
    for s in samples {
        out.extend_from_slice(&s.to_le_bytes());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn with_fmt_field(offset: usize, value: u16) -> Vec<u8> {
        let mut b = encode_wav_pcm16(&[0, 1, 2], 11025);
        b[20 + offset..22 + offset].copy_from_slice(&value.to_le_bytes());
        b
    }

    #[test]
    fn scales_by_inverse_32768() {
        let bytes = encode_wav_pcm16(&[0, 16384, -16384, 32767], 11025);
        let (rate, pcm) = decode_wav(&bytes).unwrap();
        assert_eq!(rate, 11025);
        let amps: Vec<f64> = pcm.into_iter().map(pcm16_to_amplitude).collect();
        assert_eq!(amps[..3], [0.0, 0.5, -0.5]);
        assert!((amps[3] - 0.99997).abs() < 1e-5);
        assert_eq!(pcm16_to_amplitude(i16::MIN), -1.0);
    }

    #[test]
    fn stereo_rejected() {
        let err = decode_wav(&with_fmt_field(2, 2)).unwrap_err();
        assert!(matches!(
            err,
            AudioError::UnsupportedFormat { field: "NumChannels", value: 2 }
        ));
    }

    #[test]
    fn compressed_and_8bit_rejected() {
        assert!(matches!(
            decode_wav(&with_fmt_field(0, 3)).unwrap_err(),
            AudioError::UnsupportedFormat { field: "AudioFormat", value: 3 }
        ));
        assert!(matches!(
            decode_wav(&with_fmt_field(14, 8)).unwrap_err(),
            AudioError::UnsupportedFormat { field: "BitsPerSample", value: 8 }
        ));
    }

    #[test]
    fn bad_container() {
        let mut b = encode_wav_pcm16(&[1, 2], 8000);
        b[0] = b'X';
        assert!(matches!(
            decode_wav(&b).unwrap_err(),
            AudioError::MalformedContainer { field: "ChunkID", .. }
        ));
        let b = encode_wav_pcm16(&[1, 2, 3, 4], 8000);
        assert!(matches!(
            decode_wav(&b[..b.len() - 3]).unwrap_err(),
            AudioError::MalformedContainer { field: "chunk size", .. }
        ));
        assert!(matches!(
            decode_wav(&b[..7]).unwrap_err(),
            AudioError::MalformedContainer { .. }
        ));
    }

    #[test]
    fn unknown_chunks_are_skipped() {
        let plain = encode_wav_pcm16(&[5, -5, 7], 11025);
        let mut b = plain[..36].to_vec();
        b.extend_from_slice(b"LIST");
        b.extend_from_slice(&3u32.to_le_bytes());
        b.extend_from_slice(&[1, 2, 3, 0]); // odd size plus pad byte
        b.extend_from_slice(&plain[36..]);
        let (_, pcm) = decode_wav(&b).unwrap();
        assert_eq!(pcm, vec![5, -5, 7]);
    }

    #[test]
    fn missing_file_is_not_found() {
        assert!(matches!(
            load_wav("/definitely/not/here.wav").unwrap_err(),
            AudioError::NotFound(_)
        ));
    }

    proptest! {
        #[test]
        fn pcm_round_trip_is_lossless(samples in prop::collection::vec(any::<i16>(), 1..400), rate in 1u32..96_000) {
            let (r, back) = decode_wav(&encode_wav_pcm16(&samples, rate)).unwrap();
            prop_assert_eq!(r, rate);
            prop_assert_eq!(&back, &samples);
            // amplitude scaling is exact, so the integer value is recoverable
            for (s, b) in samples.iter().zip(&back) {
                prop_assert_eq!((pcm16_to_amplitude(*b) * 32768.0) as i16, *s);
            }
        }
    }
}

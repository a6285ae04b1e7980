//! Known-answer vector files: a line-oriented text format pairing a
//! (cipher, key, IV) triple with expected keystream slices, plus the
//! verifier that replays them against this crate's implementations.
//!
//! ```text
//! # comment
//! cipher=RABBIT key=00112233445566778899aabbccddeeff iv=0000000000000000
//! stream[0..16]=02f74a1c26456bf5ecd6a536f05457b1
//! stream[16..32]=a78ac689476c697b390c9cc515d8e888
//! ```
//!
//! Records are separated by blank lines; `stream[a..b]` ranges are
//! end-exclusive byte offsets into the keystream and must be listed in
//! increasing order within a record.

use std::fmt::Write as _;

use crate::cipher_core::{CipherId, CipherInstance};

/// The bundled vector corpus the crate is validated against.
pub const BUNDLED_VECTORS: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/../../data/kat_vectors.txt"
));

/// One expected keystream slice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamCheck {
    /// Byte offset of the first expected byte.
    pub offset: u64,
    pub expected: Vec<u8>,
}

/// One (cipher, key, IV) record with its expected keystream slices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnownAnswerRecord {
    pub cipher: CipherId,
    pub key: Vec<u8>,
    pub iv: Vec<u8>,
    pub checks: Vec<StreamCheck>,
}

/// Vector-file syntax errors, each carrying the 1-based source line.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VectorError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: bad hex in {field}")]
    BadHex { line: usize, field: &'static str },
    #[error("line {line}: unknown cipher {id:?}")]
    UnknownCipher { line: usize, id: String },
}

fn parse_hex(s: &str, line: usize, field: &'static str) -> Result<Vec<u8>, VectorError> {
    hex::decode(s).map_err(|_| VectorError::BadHex { line, field })
}

/// Parses a vector file. Empty input (or only comments) yields an empty
/// list; structural problems are reported with their line number.
pub fn load_vectors(source: &str) -> Result<Vec<KnownAnswerRecord>, VectorError> {
    let mut records: Vec<KnownAnswerRecord> = Vec::new();
    let mut current: Option<KnownAnswerRecord> = None;

    for (idx, raw) in source.lines().enumerate() {
        let line = idx + 1;
        let text = raw.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        if let Some(rest) = text.strip_prefix("cipher=") {
            if let Some(rec) = current.take() {
                finish_record(rec, line, &mut records)?;
            }
            let mut fields = rest.split_whitespace();
            let id_text = fields.next().unwrap_or("");
            let cipher: CipherId = id_text.parse().map_err(|_| VectorError::UnknownCipher {
                line,
                id: id_text.to_string(),
            })?;
            let mut key = None;
            let mut iv = None;
            for field in fields {
                if let Some(v) = field.strip_prefix("key=") {
                    key = Some(parse_hex(v, line, "key")?);
                } else if let Some(v) = field.strip_prefix("iv=") {
                    iv = Some(parse_hex(v, line, "iv")?);
                } else {
                    return Err(VectorError::Parse {
                        line,
                        message: format!("unexpected field {field:?} on cipher line"),
                    });
                }
            }
            let (Some(key), Some(iv)) = (key, iv) else {
                return Err(VectorError::Parse {
                    line,
                    message: "cipher line needs both key= and iv=".into(),
                });
            };
            current = Some(KnownAnswerRecord {
                cipher,
                key,
                iv,
                checks: Vec::new(),
            });
        } else if let Some(rest) = text.strip_prefix("stream[") {
            let Some(rec) = current.as_mut() else {
                return Err(VectorError::Parse {
                    line,
                    message: "stream line before any cipher line".into(),
                });
            };
            let (range, hex_part) = rest.split_once("]=").ok_or_else(|| VectorError::Parse {
                line,
                message: "expected stream[a..b]=<hex>".into(),
            })?;
            let (a, b) = range.split_once("..").ok_or_else(|| VectorError::Parse {
                line,
                message: "range must be written a..b".into(),
            })?;
            let start: u64 = a.parse().map_err(|_| VectorError::Parse {
                line,
                message: format!("bad range start {a:?}"),
            })?;
            let end: u64 = b.parse().map_err(|_| VectorError::Parse {
                line,
                message: format!("bad range end {b:?}"),
            })?;
            if end <= start {
                return Err(VectorError::Parse {
                    line,
                    message: format!("empty or reversed range {start}..{end}"),
                });
            }
            let expected = parse_hex(hex_part, line, "stream")?;
            if expected.len() as u64 != end - start {
                return Err(VectorError::Parse {
                    line,
                    message: format!(
                        "range covers {} bytes but {} hex bytes given",
                        end - start,
                        expected.len()
                    ),
                });
            }
            if let Some(prev) = rec.checks.last() {
                if start < prev.offset + prev.expected.len() as u64 {
                    return Err(VectorError::Parse {
                        line,
                        message: "stream ranges must be increasing and non-overlapping".into(),
                    });
                }
            }
            rec.checks.push(StreamCheck {
                offset: start,
                expected,
            });
        } else {
            return Err(VectorError::Parse {
                line,
                message: format!("unrecognized line {text:?}"),
            });
        }
    }
    if let Some(rec) = current.take() {
        finish_record(rec, source.lines().count(), &mut records)?;
    }
    Ok(records)
}

fn finish_record(
    rec: KnownAnswerRecord,
    line: usize,
    records: &mut Vec<KnownAnswerRecord>,
) -> Result<(), VectorError> {
    if rec.checks.is_empty() {
        return Err(VectorError::Parse {
            line,
            message: "record has no stream lines".into(),
        });
    }
    records.push(rec);
    Ok(())
}

/// One mismatched (or unproducible) keystream slice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyFailure {
    /// Index of the record in the verified list.
    pub record: usize,
    /// Index of the check within the record.
    pub check: usize,
    pub offset: u64,
    pub expected: String,
    /// Hex of the produced bytes, or the construction error text.
    pub actual: String,
}

/// Outcome of verifying a set of records.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub total: usize,
    pub passed: usize,
    pub failures: Vec<VerifyFailure>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Human-readable summary, one line per failure.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for f in &self.failures {
            let _ = writeln!(
                out,
                "FAIL record {} check {} at offset {}: expected {} got {}",
                f.record, f.check, f.offset, f.expected, f.actual
            );
        }
        let _ = writeln!(out, "{} / {} checks passed", self.passed, self.total);
        out
    }
}

/// Replays every record against this crate's cipher implementations.
/// Construction errors (bad key/IV lengths in a record) are reported as
/// failures rather than aborting the run.
pub fn verify(records: &[KnownAnswerRecord]) -> VerifyReport {
    let mut report = VerifyReport::default();
    for (ri, rec) in records.iter().enumerate() {
        let mut instance = match CipherInstance::new(rec.cipher, &rec.key, &rec.iv) {
            Ok(i) => i,
            Err(e) => {
                for (ci, check) in rec.checks.iter().enumerate() {
                    report.total += 1;
                    report.failures.push(VerifyFailure {
                        record: ri,
                        check: ci,
                        offset: check.offset,
                        expected: hex::encode(&check.expected),
                        actual: format!("<{e}>"),
                    });
                }
                continue;
            }
        };
        for (ci, check) in rec.checks.iter().enumerate() {
            report.total += 1;
            // Checks are offset-sorted, so non-seekable ciphers can just
            // generate and discard the gap.
            let gap = check.offset - instance.position();
            let produced = if rec.cipher.seekable() {
                instance
                    .seek(check.offset)
                    .and_then(|()| instance.keystream(check.expected.len()))
            } else {
                instance
                    .keystream(gap as usize)
                    .and_then(|_| instance.keystream(check.expected.len()))
            };
            match produced {
                Ok(bytes) if bytes == check.expected => report.passed += 1,
                Ok(bytes) => report.failures.push(VerifyFailure {
                    record: ri,
                    check: ci,
                    offset: check.offset,
                    expected: hex::encode(&check.expected),
                    actual: hex::encode(bytes),
                }),
                Err(e) => report.failures.push(VerifyFailure {
                    record: ri,
                    check: ci,
                    offset: check.offset,
                    expected: hex::encode(&check.expected),
                    actual: format!("<{e}>"),
                }),
            }
        }
    }
    report
}

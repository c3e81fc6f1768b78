//! Reading and writing masks as PGM (`P2`/`P5`) or headerless CSV.
//!
//! PGM pixels are binarized with `value >= threshold`; values from files with
//! a maxval other than 255 are rescaled to 0..=255 first. CSV files carry 0/1
//! values directly, one mask row per line.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::mask::{BinaryMask, MaskError};

pub const DEFAULT_THRESHOLD: u8 = 128;

#[derive(Debug, Error)]
pub enum MaskIoError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("header declares {expected} pixels but payload carries {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("invalid pixel value: {0}")]
    InvalidValue(String),
    #[error("unsupported mask format: {0}")]
    UnsupportedFormat(String),
    #[error(transparent)]
    Mask(#[from] MaskError),
}

/// On-disk mask encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskFormat {
    /// ASCII PGM, `P2`.
    PgmAscii,
    /// Binary PGM, `P5`.
    PgmBinary,
    Csv,
}

impl MaskFormat {
    /// `.csv` maps to CSV, `.pgm`/`.pnm` to binary PGM.
    pub fn from_path(path: &Path) -> Option<Self> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "csv" => Some(Self::Csv),
            "pgm" | "pnm" => Some(Self::PgmBinary),
            _ => None,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Self::PgmAscii | Self::PgmBinary => "pgm",
            Self::Csv => "csv",
        }
    }
}

pub fn load_mask(path: impl AsRef<Path>, threshold: u8) -> Result<BinaryMask, MaskIoError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| MaskIoError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    decode_mask(&bytes, threshold)
}

/// Decodes a mask, detecting PGM by its magic number and falling back to CSV.
pub fn decode_mask(bytes: &[u8], threshold: u8) -> Result<BinaryMask, MaskIoError> {
    match bytes {
        [b'P', b'2', ..] => decode_pgm(bytes, false, threshold),
        [b'P', b'5', ..] => decode_pgm(bytes, true, threshold),
        [b'P', d, ..] if d.is_ascii_digit() => Err(MaskIoError::UnsupportedFormat(format!(
            "netpbm variant P{}",
            *d as char
        ))),
        _ => decode_csv(bytes),
    }
}

pub fn save_mask(
    mask: &BinaryMask,
    path: impl AsRef<Path>,
    format: MaskFormat,
) -> Result<(), MaskIoError> {
    let path = path.as_ref();
    fs::write(path, encode_mask(mask, format)).map_err(|source| MaskIoError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn encode_mask(mask: &BinaryMask, format: MaskFormat) -> Vec<u8> {
    match format {
        MaskFormat::PgmBinary => {
            let mut out = format!("P5\n{} {}\n255\n", mask.cols(), mask.rows()).into_bytes();
            out.extend(mask.cells().iter().map(|&v| v * 255));
            out
        }
        MaskFormat::PgmAscii => {
            let mut out = format!("P2\n{} {}\n255\n", mask.cols(), mask.rows());
            for row in mask.cells().chunks_exact(mask.cols()) {
                let line: Vec<&str> = row
                    .iter()
                    .map(|&v| if v == 1 { "255" } else { "0" })
                    .collect();
                let _ = writeln!(out, "{}", line.join(" "));
            }
            out.into_bytes()
        }
        MaskFormat::Csv => {
            let mut out = String::with_capacity(mask.len() * 2);
            for row in mask.cells().chunks_exact(mask.cols()) {
                let line: Vec<&str> = row.iter().map(|&v| if v == 1 { "1" } else { "0" }).collect();
                let _ = writeln!(out, "{}", line.join(","));
            }
            out.into_bytes()
        }
    }
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderCursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn next_token(&mut self) -> Option<&'a [u8]> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }

    fn next_number(&mut self, what: &str) -> Result<usize, MaskIoError> {
        let token = self
            .next_token()
            .ok_or_else(|| MaskIoError::MalformedHeader(format!("missing {what}")))?;
        std::str::from_utf8(token)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| {
                MaskIoError::MalformedHeader(format!(
                    "{what} is not a number: {:?}",
                    String::from_utf8_lossy(token)
                ))
            })
    }
}

fn decode_pgm(bytes: &[u8], binary: bool, threshold: u8) -> Result<BinaryMask, MaskIoError> {
    let mut cursor = HeaderCursor { bytes, pos: 2 };
    let width = cursor.next_number("width")?;
    let height = cursor.next_number("height")?;
    let maxval = cursor.next_number("maxval")?;
    if width == 0 || height == 0 {
        return Err(MaskIoError::MalformedHeader(format!(
            "zero dimension {width}x{height}"
        )));
    }
    if maxval == 0 || maxval > 255 {
        return Err(MaskIoError::MalformedHeader(format!(
            "maxval {maxval} outside 1..=255"
        )));
    }
    let expected = width * height;
    let binarize = |v: usize| -> u8 {
        let scaled = if maxval == 255 {
            v
        } else {
            (v * 255 + maxval / 2) / maxval
        };
        u8::from(scaled >= threshold as usize)
    };

    let cells = if binary {
        // Exactly one whitespace byte separates maxval from the raster.
        match bytes.get(cursor.pos) {
            Some(b) if b.is_ascii_whitespace() => {}
            _ => {
                return Err(MaskIoError::MalformedHeader(
                    "missing separator after maxval".into(),
                ))
            }
        }
        let payload = &bytes[cursor.pos + 1..];
        if payload.len() != expected {
            return Err(MaskIoError::DimensionMismatch {
                expected,
                actual: payload.len(),
            });
        }
        let mut cells = Vec::with_capacity(expected);
        for &v in payload {
            if v as usize > maxval {
                return Err(MaskIoError::InvalidValue(format!(
                    "{v} exceeds maxval {maxval}"
                )));
            }
            cells.push(binarize(v as usize));
        }
        cells
    } else {
        let mut cells = Vec::with_capacity(expected);
        let mut actual = 0usize;
        while let Some(token) = cursor.next_token() {
            actual += 1;
            if actual > expected {
                continue;
            }
            let v: usize = std::str::from_utf8(token)
                .ok()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| {
                    MaskIoError::InvalidValue(String::from_utf8_lossy(token).into_owned())
                })?;
            if v > maxval {
                return Err(MaskIoError::InvalidValue(format!(
                    "{v} exceeds maxval {maxval}"
                )));
            }
            cells.push(binarize(v));
        }
        if actual != expected {
            return Err(MaskIoError::DimensionMismatch { expected, actual });
        }
        cells
    };
    Ok(BinaryMask::new(height, width, cells)?)
}

fn decode_csv(bytes: &[u8]) -> Result<BinaryMask, MaskIoError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|_| MaskIoError::UnsupportedFormat("not a PGM and not UTF-8 CSV".into()))?;
    let mut cells = Vec::new();
    let mut cols = None;
    let mut rows = 0usize;
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let before = cells.len();
        for field in line.split(',') {
            match field.trim() {
                "0" => cells.push(0),
                "1" => cells.push(1),
                other => {
                    return Err(MaskIoError::InvalidValue(format!(
                        "CSV cell {other:?} on line {} is not 0 or 1",
                        rows + 1
                    )))
                }
            }
        }
        let width = cells.len() - before;
        match cols {
            None => cols = Some(width),
            Some(c) if c != width => {
                return Err(MaskIoError::DimensionMismatch {
                    expected: c,
                    actual: width,
                })
            }
            _ => {}
        }
        rows += 1;
    }
    let cols = cols.ok_or_else(|| MaskIoError::MalformedHeader("empty CSV mask".into()))?;
    Ok(BinaryMask::new(rows, cols, cells)?)
}

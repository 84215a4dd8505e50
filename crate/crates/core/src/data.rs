//! Datasets: the embedded Kevlar 49/epoxy failure times and file loading.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{BwError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DataSource {
    Embedded,
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFormat {
    Csv,
    Whitespace,
}

impl std::str::FromStr for DataFormat {
    type Err = BwError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(DataFormat::Csv),
            "whitespace" | "ws" | "txt" => Ok(DataFormat::Whitespace),
            other => Err(BwError::domain(format!("unknown data format {other:?}"))),
        }
    }
}

/// A nonempty sample of finite positive reals.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    values: Vec<f64>,
    label: String,
    source: DataSource,
}

impl Dataset {
    pub fn new(values: Vec<f64>, label: impl Into<String>, source: DataSource) -> Result<Self> {
        if values.is_empty() {
            return Err(BwError::domain("dataset is empty"));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
            return Err(BwError::domain(format!("value {v} at index {i} is not finite and positive")));
        }
        Ok(Dataset {
            values,
            label: label.into(),
            source,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn source(&self) -> DataSource {
        self.source
    }

    /// FNV-1a over the little-endian bit patterns of the values.
    pub fn checksum(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for v in &self.values {
            for b in v.to_bits().to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
        h
    }

    /// One value per line under a `value` header, shortest round-trip formatting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("value\n");
        for v in &self.values {
            writeln!(out, "{v}").unwrap();
        }
        out
    }
}

const KEVLAR: [f64; 101] = [
    0.01, 0.01, 0.02, 0.02, 0.02, 0.03, 0.03, 0.04, 0.05, 0.06, 0.07, 0.07, 0.08, 0.09, 0.09, 0.10, 0.10, 0.11, 0.11,
    0.12, 0.13, 0.18, 0.19, 0.20, 0.23, 0.24, 0.24, 0.29, 0.34, 0.35, 0.36, 0.38, 0.40, 0.42, 0.43, 0.52, 0.54, 0.56,
    0.60, 0.60, 0.63, 0.65, 0.67, 0.68, 0.72, 0.72, 0.72, 0.73, 0.79, 0.79, 0.80, 0.80, 0.83, 0.85, 0.90, 0.92, 0.95,
    0.99, 1.00, 1.01, 1.02, 1.03, 1.05, 1.10, 1.10, 1.11, 1.15, 1.18, 1.20, 1.29, 1.31, 1.33, 1.34, 1.40, 1.43, 1.45,
    1.50, 1.51, 1.52, 1.53, 1.54, 1.54, 1.55, 1.58, 1.60, 1.63, 1.64, 1.80, 1.80, 1.81, 2.02, 2.05, 2.14, 2.17, 2.33,
    3.03, 3.03, 3.34, 4.20, 4.69, 7.89,
];

/// Checksum of the embedded Kevlar values.
pub const KEVLAR_CHECKSUM: u64 = 3367565500158510513;

/// Failure times (hours) of 101 Kevlar 49/epoxy strands at 90% stress.
pub fn kevlar_dataset() -> Dataset {
    Dataset {
        values: KEVLAR.to_vec(),
        label: "kevlar".into(),
        source: DataSource::Embedded,
    }
}

/// Parses a dataset from text. Blank lines and lines starting with `#` are
/// skipped; a CSV whose first line has no numeric field is taken as a header.
pub fn parse_dataset(text: &str, format: DataFormat, label: &str) -> Result<Dataset> {
    let mut values = Vec::new();
    let mut seen_data = false;
    for (li, line) in text.lines().enumerate() {
        let line_no = li + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = match format {
            DataFormat::Csv => trimmed.split(',').map(str::trim).collect(),
            DataFormat::Whitespace => trimmed.split_whitespace().collect(),
        };
        if !seen_data && format == DataFormat::Csv && tokens.iter().all(|t| t.parse::<f64>().is_err()) {
            seen_data = true;
            continue;
        }
        seen_data = true;
        for (ci, tok) in tokens.iter().enumerate() {
            if tok.is_empty() {
                continue;
            }
            let v: f64 = tok.parse().map_err(|_| BwError::Parse {
                line: line_no,
                column: ci + 1,
                message: format!("malformed number {tok:?}"),
            })?;
            if !(v.is_finite() && v > 0.0) {
                return Err(BwError::domain(format!(
                    "line {line_no}, column {}: value {v} is not finite and positive",
                    ci + 1
                )));
            }
            values.push(v);
        }
    }
    Dataset::new(values, label, DataSource::File)
}

pub fn load_dataset(path: &Path, format: DataFormat) -> Result<Dataset> {
    let text = std::fs::read_to_string(path)?;
    let label = path.file_stem().and_then(|s| s.to_str()).unwrap_or("data");
    parse_dataset(&text, format, label)
}

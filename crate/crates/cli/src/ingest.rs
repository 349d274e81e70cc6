//! Reading JSON and CSV inputs into the core moment types.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use mrb_core::data::{BinaryIVData, BoundsMoments};

use crate::error::{CliError, CliResult};

/// Input file formats, chosen by extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    Json,
    Csv,
}

/// Format of `path` from its extension.
pub fn input_kind(path: &Path) -> CliResult<InputKind> {
    match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
        Some("json") => Ok(InputKind::Json),
        Some("csv") => Ok(InputKind::Csv),
        _ => Err(ingest(path, None, "expected a .json or .csv file")),
    }
}

fn ingest(path: &Path, column: Option<&str>, message: impl Into<String>) -> CliError {
    CliError::Ingest { path: path.to_path_buf(), column: column.map(String::from), message: message.into() }
}

/// Parses a JSON file.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| ingest(path, None, e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| ingest(path, None, e.to_string()))
}

/// Rows of a CSV file restricted to the declared columns, in declared order.
#[derive(Debug, Clone)]
pub struct CsvTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// Header of a CSV file.
pub fn csv_header(path: &Path) -> CliResult<Vec<String>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| ingest(path, None, e.to_string()))?;
    let h = rdr.headers().map_err(|e| ingest(path, None, e.to_string()))?;
    Ok(h.iter().map(|s| s.trim().to_string()).collect())
}

/// Reads a CSV file whose header must contain every column of `schema`.
pub fn read_csv(path: &Path, schema: &[&str]) -> CliResult<CsvTable> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| ingest(path, None, e.to_string()))?;
    let header: Vec<String> =
        rdr.headers().map_err(|e| ingest(path, None, e.to_string()))?.iter().map(|s| s.trim().to_string()).collect();
    let mut index = Vec::new();
    for col in schema {
        match header.iter().position(|h| h == col) {
            Some(i) => index.push(i),
            None => {
                return Err(ingest(
                    path,
                    Some(col),
                    format!("missing column `{col}`; expected columns {}", schema.join(",")),
                ))
            }
        }
    }
    let mut rows = Vec::new();
    for (n, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| ingest(path, None, e.to_string()))?;
        let row: Vec<String> = index.iter().map(|&i| rec.get(i).unwrap_or("").trim().to_string()).collect();
        for (v, col) in row.iter().zip(schema) {
            if v.is_empty() {
                return Err(ingest(path, Some(col), format!("row {}: column `{col}` is empty", n + 2)));
            }
        }
        rows.push(row);
    }
    Ok(CsvTable { columns: schema.iter().map(|s| s.to_string()).collect(), rows })
}

impl CsvTable {
    /// Parses a finite real from column `c` of row `r`.
    pub fn real(&self, path: &Path, r: usize, c: usize) -> CliResult<f64> {
        let raw = &self.rows[r][c];
        match raw.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(ingest(path, Some(&self.columns[c]), format!("row {}: `{raw}` is not a finite number", r + 2))),
        }
    }

    /// Parses an integer from column `c` of row `r`.
    pub fn integer(&self, path: &Path, r: usize, c: usize) -> CliResult<i64> {
        let raw = &self.rows[r][c];
        raw.parse::<i64>()
            .map_err(|_| ingest(path, Some(&self.columns[c]), format!("row {}: `{raw}` is not an integer", r + 2)))
    }

    /// Parses a binary indicator from column `c` of row `r`.
    pub fn binary(&self, path: &Path, r: usize, c: usize) -> CliResult<u8> {
        match self.integer(path, r, c)? {
            0 => Ok(0),
            1 => Ok(1),
            v => Err(ingest(path, Some(&self.columns[c]), format!("row {}: expected 0 or 1, found {v}", r + 2))),
        }
    }
}

/// Number of rows per instrument cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellCount {
    pub z: String,
    pub count: usize,
}

/// Counts rows per label and checks declared levels and the minimum count.
pub fn cell_counts<'a>(
    path: &Path,
    labels: impl Iterator<Item = &'a str>,
    declared: Option<&[String]>,
    min_count: usize,
) -> CliResult<Vec<CellCount>> {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for l in labels {
        *counts.entry(l.to_string()).or_default() += 1;
    }
    if let Some(levels) = declared {
        for l in levels {
            counts.entry(l.clone()).or_default();
        }
        if let Some(extra) = counts.keys().find(|k| !levels.contains(k)) {
            return Err(ingest(
                path,
                Some("z"),
                format!("instrument value `{extra}` is not among the declared levels"),
            ));
        }
    }
    let min = min_count.max(1);
    if let Some((label, &count)) = counts.iter().find(|(_, &c)| c < min) {
        return Err(CliError::Cell { path: path.to_path_buf(), label: label.clone(), count, min });
    }
    Ok(counts.into_iter().map(|(z, count)| CellCount { z, count }).collect())
}

/// Pre-aggregated moments: columns `z,weight,lower_mean,upper_mean`, passed through unchanged.
pub fn read_bounds_aggregated(path: &Path) -> CliResult<BoundsMoments> {
    let t = read_csv(path, &["z", "weight", "lower_mean", "upper_mean"])?;
    let mut z = Vec::new();
    let mut w = Vec::new();
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for r in 0..t.rows.len() {
        z.push(t.rows[r][0].clone());
        w.push(t.real(path, r, 1)?);
        lo.push(t.real(path, r, 2)?);
        hi.push(t.real(path, r, 3)?);
    }
    BoundsMoments::new(z, w, lo, hi).map_err(|e| CliError::from_input(path, e))
}

/// Micro rows `y,x,z` with a categorical treatment `x`.
pub fn read_treatment_rows(path: &Path) -> CliResult<Vec<(f64, String, String)>> {
    let t = read_csv(path, &["y", "x", "z"])?;
    (0..t.rows.len()).map(|r| Ok((t.real(path, r, 0)?, t.rows[r][1].clone(), t.rows[r][2].clone()))).collect()
}

/// Micro rows `y,x,z` with a scalar treatment `x`.
pub fn read_lipschitz_rows(path: &Path) -> CliResult<Vec<(f64, f64, String)>> {
    let t = read_csv(path, &["y", "x", "z"])?;
    (0..t.rows.len()).map(|r| Ok((t.real(path, r, 0)?, t.real(path, r, 1)?, t.rows[r][2].clone()))).collect()
}

/// Micro rows `y,d,z` with a binary treatment and an integer instrument.
pub fn read_ydz_rows(path: &Path) -> CliResult<Vec<(f64, u8, i64)>> {
    let t = read_csv(path, &["y", "d", "z"])?;
    (0..t.rows.len()).map(|r| Ok((t.real(path, r, 0)?, t.binary(path, r, 1)?, t.integer(path, r, 2)?))).collect()
}

/// Cell frequencies `q_ij(z) = P(Y = i, D = j | Z = z)` from binary micro rows `y,d,z`.
pub fn binary_iv_from_rows(path: &Path, rows: &[(f64, u8, i64)]) -> CliResult<BinaryIVData> {
    let mut counts = [[0usize; 4]; 2];
    for &(y, d, z) in rows {
        if !(y == 0.0 || y == 1.0) {
            return Err(ingest(path, Some("y"), format!("binary outcome expected, found {y}")));
        }
        if !(z == 0 || z == 1) {
            return Err(ingest(path, Some("z"), format!("binary instrument expected, found {z}")));
        }
        let slot = match (y as u8, d) {
            (1, 1) => 0,
            (0, 1) => 1,
            (1, 0) => 2,
            _ => 3,
        };
        counts[z as usize][slot] += 1;
    }
    let mut arms = [[0.0; 4]; 2];
    for z in 0..2 {
        let n: usize = counts[z].iter().sum();
        if n == 0 {
            return Err(CliError::Cell { path: path.to_path_buf(), label: z.to_string(), count: 0, min: 1 });
        }
        for s in 0..4 {
            arms[z][s] = counts[z][s] as f64 / n as f64;
        }
    }
    BinaryIVData::new(arms[0], arms[1]).map_err(|e| CliError::from_input(path, e))
}

//! Versioned JSON reports and markdown tables.

use std::fs;
use std::path::Path;

use serde::Serialize;

use mrb_core::setcore::{BoxKD, GridSet, HPolytope, IdentifiedSet, Interval1D, SetUnion};

use crate::error::{CliError, CliResult};

/// Schema tag written into every JSON report.
pub const SCHEMA: &str = "mrb-report/1";

/// Output format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Markdown,
}

/// Top-level JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct Envelope<T: Serialize> {
    pub schema: &'static str,
    pub command: &'static str,
    pub seed: Option<u64>,
    /// Whether the full model is refuted by the data.
    pub refuted: bool,
    pub result: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<serde_json::Value>,
}

/// A finished command: the JSON envelope and its markdown rendering.
#[derive(Debug, Clone)]
pub struct Rendered {
    pub refuted: bool,
    pub json: String,
    pub markdown: String,
}

impl Rendered {
    /// Serializes an envelope and pairs it with its markdown.
    pub fn new<T: Serialize>(env: &Envelope<T>, markdown: String) -> CliResult<Rendered> {
        let mut json = serde_json::to_string_pretty(env)
            .map_err(|e| CliError::Model(mrb_core::Error::Invalid(format!("report serialization failed: {e}"))))?;
        json.push('\n');
        Ok(Rendered { refuted: env.refuted, json, markdown })
    }

    /// Writes the report in `format` to `path`, or to standard output.
    pub fn emit(&self, format: Format, path: Option<&Path>) -> CliResult<()> {
        let text = match format {
            Format::Json => &self.json,
            Format::Markdown => &self.markdown,
        };
        match path {
            Some(p) => fs::write(p, text).map_err(|source| CliError::Write { path: p.to_path_buf(), source }),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

/// Formats a real with four decimals, or `±inf`.
pub fn real(v: f64) -> String {
    if v == f64::INFINITY {
        "+inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v:.4}")
    }
}

/// `[a, b]`, `(a, b]`, ..., or `Empty`.
pub fn interval(iv: &Interval1D) -> String {
    if iv.is_empty() {
        return "Empty".into();
    }
    let l = if iv.lo_open { '(' } else { '[' };
    let r = if iv.hi_open { ')' } else { ']' };
    format!("{l}{}, {}{r}", real(iv.lo), real(iv.hi))
}

/// Product of intervals, or `Empty`.
pub fn boxkd(b: &BoxKD) -> String {
    if b.is_empty() {
        return "Empty".into();
    }
    b.dims.iter().map(interval).collect::<Vec<_>>().join(" × ")
}

/// Range of marked points per axis, with the marked count.
pub fn grid(g: &GridSet) -> String {
    if g.is_empty() {
        return "Empty".into();
    }
    let d = g.dim();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for p in g.marked_points() {
        for k in 0..d {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let ranges: Vec<String> = (0..d).map(|k| format!("[{}, {}]", real(lo[k]), real(hi[k]))).collect();
    format!("{} ({} of {} grid points)", ranges.join(" × "), g.count(), g.len())
}

/// Short description of a polytope through its bounding box.
pub fn polytope(p: &HPolytope) -> String {
    match p.is_empty() {
        Ok(true) => "Empty".into(),
        Ok(false) => match p.bounding_box() {
            Ok(b) => format!("within {}", boxkd(&b)),
            Err(_) => "nonempty".into(),
        },
        Err(_) => "undetermined".into(),
    }
}

/// Any identified set as a table cell.
pub fn set(s: &IdentifiedSet) -> String {
    match s {
        IdentifiedSet::Interval(iv) => interval(iv),
        IdentifiedSet::Box(b) => boxkd(b),
        IdentifiedSet::Polytope(p) => polytope(p),
        IdentifiedSet::Grid(g) => grid(g),
        IdentifiedSet::Union(u) => union(u),
    }
}

/// Union of sets joined by `∪`, or `Empty`.
pub fn union(u: &SetUnion) -> String {
    let parts: Vec<String> = u.parts.iter().map(set).filter(|s| s != "Empty").collect();
    if parts.is_empty() {
        "Empty".into()
    } else {
        parts.join(" ∪ ")
    }
}

/// A markdown table; `|` inside cells is escaped.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    fn line<'a>(cells: impl Iterator<Item = &'a str>) -> String {
        format!("| {} |\n", cells.map(|c| c.replace('|', "\\|")).collect::<Vec<_>>().join(" | "))
    }
    let mut out = line(header.iter().copied());
    out.push_str(&format!("|{}\n", header.iter().map(|_| "---|").collect::<String>()));
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str)));
    }
    out
}

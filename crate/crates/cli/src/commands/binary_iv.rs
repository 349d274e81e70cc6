//! `mrb binary-iv`: the binary instrument model and its case table.

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use serde_json::json;

use mrb_core::binaryiv::{
    combo, identified_set_for, instrumental_inequalities, mrb_binary_iv, AcdeDirection, AcdeStatement, BinaryIVMrb,
    ASSUMPTIONS,
};
use mrb_core::data::BinaryIVData;
use mrb_core::lattice::Subset;
use mrb_core::oracles::{oracle_binaryiv_consistent, oracle_binaryiv_grid, OracleConfig};
use mrb_core::setcore::{BoxKD, HPolytope};

use super::yes_no;
use crate::error::{CliError, CliResult};
use crate::ingest::{self, InputKind};
use crate::report::{boxkd, polytope, real, table, Envelope, Rendered};
use crate::Globals;

#[derive(Debug, Clone, Args)]
pub struct BinaryIvArgs {
    /// Cell frequencies (JSON) or binary micro rows `y,d,z` (CSV).
    #[arg(long)]
    pub input: PathBuf,
    /// Also report the identified set of this combination, e.g. `1,2,4,5`.
    #[arg(long, value_delimiter = ',')]
    pub combo: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize)]
struct InequalityRow {
    name: String,
    lhs: f64,
    slack: f64,
    holds: bool,
}

#[derive(Debug, Clone, Serialize)]
struct ComboReport {
    assumptions: Vec<String>,
    set: HPolytope,
    empty: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    bounding_box: Option<BoxKD>,
}

#[derive(Debug, Clone, Serialize)]
struct BinaryIvReport {
    data: BinaryIVData,
    inequalities: Vec<InequalityRow>,
    case_label: String,
    mrb: BinaryIVMrb,
    #[serde(skip_serializing_if = "Option::is_none")]
    mrb_bounding_box: Option<BoxKD>,
    #[serde(skip_serializing_if = "Option::is_none")]
    combo: Option<ComboReport>,
}

fn combo_report(d: &BinaryIVData, s: Subset) -> CliResult<ComboReport> {
    let set = identified_set_for(d, s)?;
    let empty = set.is_empty()?;
    let bounding_box = if empty { None } else { Some(set.bounding_box()?) };
    Ok(ComboReport { assumptions: labels(s), set, empty, bounding_box })
}

fn labels(s: Subset) -> Vec<String> {
    s.indices().into_iter().map(|i| ASSUMPTIONS[i].to_string()).collect()
}

fn case_label(r: &BinaryIVMrb) -> String {
    match r.case {
        1 => "row 1: all instrumental inequalities hold; keep every assumption".into(),
        c => format!("row {c}: II{} fails; drop {}", c - 1, r.dropped.join(", ")),
    }
}

pub fn run(a: &BinaryIvArgs, g: &Globals) -> CliResult<Rendered> {
    let path = &a.input;
    let d: BinaryIVData = match ingest::input_kind(path)? {
        InputKind::Json => ingest::read_json(path)?,
        InputKind::Csv => {
            let rows = ingest::read_ydz_rows(path)?;
            ingest::binary_iv_from_rows(path, &rows)?
        }
    };
    let requested = match &a.combo {
        Some(nums) => {
            if nums.iter().any(|n| !(1..=5).contains(n)) {
                return Err(CliError::Flags("assumption numbers must lie in 1..=5".into()));
            }
            Some(combo(nums))
        }
        None => None,
    };
    let inequalities = instrumental_inequalities(&d)
        .iter()
        .enumerate()
        .map(|(i, c)| InequalityRow { name: format!("II{}", i + 1), lhs: c.lhs, slack: c.slack, holds: c.holds })
        .collect();
    let mrb = mrb_binary_iv(&d)?;
    let mrb_bounding_box = if mrb.set.is_empty()? { None } else { Some(mrb.set.bounding_box()?) };
    let combo = match requested {
        Some(s) => Some(combo_report(&d, s)?),
        None => None,
    };
    let refuted = mrb.case != 1;
    let rep = BinaryIvReport { data: d, inequalities, case_label: case_label(&mrb), mrb, mrb_bounding_box, combo };
    let oracle = if g.oracle { Some(oracle_digest(&d, &rep, requested)?) } else { None };
    let md = markdown(&rep);
    let env =
        Envelope { schema: crate::report::SCHEMA, command: "binary-iv", seed: g.seed, refuted, result: rep, oracle };
    Rendered::new(&env, md)
}

fn disagreements(d: &BinaryIVData, s: Subset, set: &HPolytope, step: f64) -> CliResult<usize> {
    let grid = oracle_binaryiv_grid(d, s, step)?;
    let mut p = [0.0; 4];
    Ok((0..grid.len())
        .filter(|&i| {
            grid.point_into(i, &mut p);
            grid.is_marked(i) != set.contains_tol(&p, 1e-9)
        })
        .count())
}

fn oracle_digest(d: &BinaryIVData, rep: &BinaryIvReport, requested: Option<Subset>) -> CliResult<serde_json::Value> {
    let step = OracleConfig::default().grid_step_4d;
    let kept = combo(&rep.mrb.kept.iter().map(|l| l[1..].parse::<usize>().unwrap_or(0)).collect::<Vec<_>>());
    let mut digest = json!({
        "grid_step": step,
        "full_model_consistent": oracle_binaryiv_consistent(d, Subset::full(5))?,
        "mrb_grid_disagreements": disagreements(d, kept, &rep.mrb.set, step)?,
    });
    if let (Some(s), Some(c)) = (requested, &rep.combo) {
        if s.contains(0) {
            digest["combo_grid_disagreements"] = json!(disagreements(d, s, &c.set, step)?);
        }
    }
    Ok(digest)
}

fn acde(a: &AcdeStatement) -> String {
    match a.direction {
        AcdeDirection::Zero => format!("ACDE({}) = 0", a.d),
        AcdeDirection::AtLeast => format!("ACDE({}) ≥ {}", a.d, real(a.bound)),
        AcdeDirection::AtMost => format!("ACDE({}) ≤ {}", a.d, real(a.bound)),
    }
}

fn markdown(r: &BinaryIvReport) -> String {
    let ineq: Vec<Vec<String>> = r
        .inequalities
        .iter()
        .map(|i| vec![i.name.clone(), real(i.lhs), real(i.slack), yes_no(i.holds).to_string()])
        .collect();
    let mut out = format!("# Binary IV\n\n{}\n", table(&["Inequality", "LHS", "Slack", "Holds"], &ineq));
    let mut rows = vec![
        vec!["Case".to_string(), r.case_label.clone()],
        vec!["Kept".to_string(), r.mrb.kept.join(", ")],
        vec!["Dropped".to_string(), if r.mrb.dropped.is_empty() { "none".into() } else { r.mrb.dropped.join(", ") }],
        vec![
            "MRB (θ11 × θ10 × θ01 × θ00)".to_string(),
            r.mrb_bounding_box.as_ref().map_or_else(|| "Empty".to_string(), |b| format!("within {}", boxkd(b))),
        ],
    ];
    rows.extend(r.mrb.acde.iter().map(|a| vec!["Direct effect".to_string(), acde(a)]));
    if let Some(c) = &r.combo {
        rows.push(vec![format!("Θ_I({{{}}})", c.assumptions.join(",")), polytope(&c.set)]);
    }
    out.push_str(&table(&["Quantity", "Value"], &rows));
    out
}

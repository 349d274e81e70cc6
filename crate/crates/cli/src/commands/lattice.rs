//! `mrb lattice`: minimal relaxations of a user-supplied assumption family.

use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};

use mrb_core::lattice::{
    falsification_adaptive_set, find_discordance, find_minimal_relaxations, is_nonconflicting, AssumptionFamily,
    RelaxationReportJson, SlackDir, SlackFamily,
};
use mrb_core::setcore::IdentifiedSet;

use super::yes_no;
use crate::error::{CliError, CliResult};
use crate::ingest;
use crate::report::{set, table, union, Envelope, Rendered};
use crate::Globals;

#[derive(Debug, Clone, Args)]
pub struct LatticeArgs {
    /// Family description (JSON).
    #[arg(long)]
    pub family: PathBuf,
}

/// One assumption and its identified set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtomSpec {
    pub id: String,
    pub set: IdentifiedSet,
}

/// Family file: atoms combined by intersection, plus optional extras.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilySpec {
    pub atoms: Vec<AtomSpec>,
    /// Parameter space; the whole space of the atoms' dimension by default.
    #[serde(default)]
    pub space: Option<IdentifiedSet>,
    /// Relaxable endpoints per atom, for the falsification adaptive set.
    #[serde(default)]
    pub slack: Option<Vec<SlackDir>>,
    /// Grid step for the falsification adaptive set.
    #[serde(default)]
    pub grid_step: Option<f64>,
    /// Statements checked for being nonconflicting.
    #[serde(default)]
    pub statements: Vec<IdentifiedSet>,
}

#[derive(Debug, Clone, Serialize)]
struct Relaxation {
    members: Vec<String>,
    set: IdentifiedSet,
}

#[derive(Debug, Clone, Serialize)]
struct Certificate {
    submodel_a: Vec<String>,
    submodel_b: Vec<String>,
    set_a: IdentifiedSet,
    set_b: IdentifiedSet,
}

#[derive(Debug, Clone, Serialize)]
struct StatementCheck {
    statement: IdentifiedSet,
    nonconflicting: bool,
}

#[derive(Debug, Clone, Serialize)]
struct LatticeReport {
    #[serde(flatten)]
    relaxation: RelaxationReportJson,
    relaxations: Vec<Relaxation>,
    certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    falsification_adaptive_set: Option<IdentifiedSet>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    statements: Vec<StatementCheck>,
}

/// Builds the family described by a spec.
pub fn build_family(spec: &FamilySpec) -> mrb_core::Result<AssumptionFamily> {
    let dim = spec.atoms.first().map_or(1, |a| a.set.dim());
    let space = spec.space.clone().unwrap_or_else(|| IdentifiedSet::whole(dim));
    let ids = spec.atoms.iter().map(|a| a.id.clone()).collect();
    let sets = spec.atoms.iter().map(|a| a.set.clone()).collect();
    AssumptionFamily::intersection(ids, sets, space)
}

pub fn run(a: &LatticeArgs, g: &Globals) -> CliResult<Rendered> {
    let spec: FamilySpec = ingest::read_json(&a.family)?;
    let fam = build_family(&spec).map_err(|e| CliError::from_input(&a.family, e))?;
    let report = find_minimal_relaxations(&fam)?;
    let relaxations = report
        .minimal_relaxations
        .iter()
        .zip(&report.relaxation_sets)
        .map(|(s, set)| Relaxation { members: fam.labels(*s), set: set.clone() })
        .collect();
    let certificate = find_discordance(&fam)?.map(|c| Certificate {
        submodel_a: fam.labels(c.submodel_a),
        submodel_b: fam.labels(c.submodel_b),
        set_a: c.set_a,
        set_b: c.set_b,
    });
    let fas = match &spec.slack {
        Some(dirs) => {
            let mut sf = SlackFamily::both_sides(fam.clone());
            sf.slack_dirs = dirs.clone();
            if let Some(step) = spec.grid_step {
                sf.grid_step = step;
            }
            Some(falsification_adaptive_set(&sf)?)
        }
        None => None,
    };
    let statements = spec
        .statements
        .iter()
        .map(|s| Ok(StatementCheck { statement: s.clone(), nonconflicting: is_nonconflicting(&fam, s)? }))
        .collect::<CliResult<Vec<_>>>()?;
    let refuted = report.full_model_refuted;
    let rep = LatticeReport {
        relaxation: report.to_json(),
        relaxations,
        certificate,
        falsification_adaptive_set: fas,
        statements,
    };
    let md = markdown(&rep);
    let env = Envelope {
        schema: crate::report::SCHEMA,
        command: "lattice",
        seed: g.seed,
        refuted,
        result: rep,
        oracle: None,
    };
    Rendered::new(&env, md)
}

fn markdown(r: &LatticeReport) -> String {
    let mut out = String::from("# Assumption lattice\n\n");
    let rows: Vec<Vec<String>> =
        r.relaxations.iter().map(|x| vec![format!("{{{}}}", x.members.join(", ")), set(&x.set)]).collect();
    out.push_str(&table(&["Minimal relaxation", "Identified set"], &rows));
    let f = &r.relaxation.flags;
    let mut summary = vec![
        vec!["Refuted".to_string(), yes_no(r.relaxation.refuted).to_string()],
        vec!["MRB".to_string(), union(&r.relaxation.mrb)],
        vec!["Unique minimal relaxation".to_string(), yes_no(f.unique_minimal).to_string()],
        vec!["All relaxations point-identify".to_string(), yes_no(f.all_singleton).to_string()],
        vec!["No nested consistent pair".to_string(), yes_no(f.no_nested_ok).to_string()],
    ];
    if let Some(c) = &r.certificate {
        summary.push(vec![
            "Discordant pair".to_string(),
            format!(
                "{{{}}}: {} vs {{{}}}: {}",
                c.submodel_a.join(", "),
                set(&c.set_a),
                c.submodel_b.join(", "),
                set(&c.set_b)
            ),
        ]);
    }
    if let Some(fas) = &r.falsification_adaptive_set {
        summary.push(vec!["Falsification adaptive set".to_string(), set(fas)]);
    }
    for s in &r.statements {
        summary.push(vec![
            format!("Statement {}", set(&s.statement)),
            format!("nonconflicting: {}", yes_no(s.nonconflicting)),
        ]);
    }
    out.push('\n');
    out.push_str(&table(&["Quantity", "Value"], &summary));
    out
}

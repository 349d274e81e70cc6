//! `mrb intersect`: conditional mean bounds with a discrete instrument.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::json;

use mrb_core::data::BoundsMoments;
use mrb_core::intersect::{
    construct_pointid_instrument, discrete_treatment_moments, lipschitz_moments, mrb_intersection, mrb_mass_conditions,
    outer_set, sharp_bounds, w_interval,
};
use mrb_core::oracles::{oracle_intersection_idset, oracle_mrb_by_instrument_sweep, OracleConfig};
use mrb_core::setcore::Interval1D;

use super::yes_no;
use crate::error::{CliError, CliResult};
use crate::ingest::{self, CellCount, InputKind};
use crate::report::{interval, real, table, Envelope, Rendered};
use crate::Globals;

/// CSV layouts accepted by `mrb intersect`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IntersectSchema {
    /// Columns `z,weight,lower_mean,upper_mean`.
    Aggregated,
    /// Micro rows `y,x,z` with a categorical treatment; needs `--treatment`, `--y-min`, `--y-max`.
    Treatment,
    /// Micro rows `y,x,z` with a scalar treatment; needs `--x0` and `--lipschitz-tau`.
    Lipschitz,
}

#[derive(Debug, Clone, Args)]
pub struct IntersectArgs {
    /// Moments (JSON) or CSV rows.
    #[arg(long)]
    pub input: PathBuf,
    /// CSV layout; inferred from the header and flags when omitted.
    #[arg(long, value_enum)]
    pub schema: Option<IntersectSchema>,
    /// Treatment level whose mean outcome is bounded (treatment schema).
    #[arg(long)]
    pub treatment: Option<String>,
    /// Lower end of the outcome support (treatment schema).
    #[arg(long, allow_negative_numbers = true)]
    pub y_min: Option<f64>,
    /// Upper end of the outcome support (treatment schema).
    #[arg(long, allow_negative_numbers = true)]
    pub y_max: Option<f64>,
    /// Treatment value whose mean outcome is bounded (Lipschitz schema).
    #[arg(long, allow_negative_numbers = true)]
    pub x0: Option<f64>,
    /// Lipschitz constant of the outcome in the treatment.
    #[arg(long)]
    pub lipschitz_tau: Option<f64>,
    /// Smallest admissible number of rows per instrument value.
    #[arg(long, default_value_t = 1)]
    pub min_count: usize,
    /// Expected instrument values; a value without rows is a cell error.
    #[arg(long, value_delimiter = ',')]
    pub z_levels: Option<Vec<String>>,
    /// Build a two-column instrument point-identifying this value (refuted models only).
    #[arg(long, allow_negative_numbers = true)]
    pub point_id: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
struct MassConditions {
    /// `P(E[Y̲|Z] ≤ γ̄) > 0`.
    lower: bool,
    /// `P(E[Ȳ|Z] ≥ γ̲) > 0`.
    upper: bool,
}

#[derive(Debug, Clone, Serialize)]
struct PointId {
    theta: f64,
    instrument: Vec<Vec<f64>>,
    outer_set: Interval1D,
}

#[derive(Debug, Clone, Serialize)]
struct IntersectReport {
    moments: BoundsMoments,
    #[serde(skip_serializing_if = "Option::is_none")]
    cells: Option<Vec<CellCount>>,
    gamma_lower: f64,
    gamma_upper: f64,
    identified_set: Interval1D,
    mrb: Interval1D,
    mass_conditions: MassConditions,
    #[serde(skip_serializing_if = "Option::is_none")]
    w: Option<Interval1D>,
    #[serde(skip_serializing_if = "Option::is_none")]
    point_id: Option<PointId>,
}

fn load(a: &IntersectArgs) -> CliResult<(BoundsMoments, Option<Vec<CellCount>>)> {
    let path = &a.input;
    if ingest::input_kind(path)? == InputKind::Json {
        return Ok((ingest::read_json(path)?, None));
    }
    let schema = match a.schema {
        Some(s) => s,
        None if ingest::csv_header(path)?.iter().any(|h| h == "lower_mean") => IntersectSchema::Aggregated,
        None if a.lipschitz_tau.is_some() => IntersectSchema::Lipschitz,
        None if a.treatment.is_some() => IntersectSchema::Treatment,
        None => {
            return Err(CliError::Flags(
                "micro rows need --treatment with --y-min/--y-max, or --x0 with --lipschitz-tau".into(),
            ))
        }
    };
    let levels = a.z_levels.as_deref();
    match schema {
        IntersectSchema::Aggregated => Ok((ingest::read_bounds_aggregated(path)?, None)),
        IntersectSchema::Treatment => {
            let (Some(t), Some(lo), Some(hi)) = (&a.treatment, a.y_min, a.y_max) else {
                return Err(CliError::Flags("the treatment schema needs --treatment, --y-min and --y-max".into()));
            };
            let rows = ingest::read_treatment_rows(path)?;
            let cells = ingest::cell_counts(path, rows.iter().map(|r| r.2.as_str()), levels, a.min_count)?;
            let m =
                discrete_treatment_moments(&rows, t, lo, hi, a.min_count).map_err(|e| CliError::from_input(path, e))?;
            Ok((m, Some(cells)))
        }
        IntersectSchema::Lipschitz => {
            let (Some(x0), Some(tau)) = (a.x0, a.lipschitz_tau) else {
                return Err(CliError::Flags("the Lipschitz schema needs --x0 and --lipschitz-tau".into()));
            };
            let rows = ingest::read_lipschitz_rows(path)?;
            let cells = ingest::cell_counts(path, rows.iter().map(|r| r.2.as_str()), levels, a.min_count)?;
            let m = lipschitz_moments(&rows, x0, tau, a.min_count).map_err(|e| CliError::from_input(path, e))?;
            Ok((m, Some(cells)))
        }
    }
}

pub fn run(a: &IntersectArgs, g: &Globals) -> CliResult<Rendered> {
    let (m, cells) = load(a)?;
    let sb = sharp_bounds(&m);
    let (lower, upper) = mrb_mass_conditions(&m);
    let mrb = mrb_intersection(&m);
    let w = if sb.refuted { Some(w_interval(&m)?) } else { None };
    let point_id = match a.point_id {
        Some(theta) => {
            let h = construct_pointid_instrument(&m, theta)?;
            Some(PointId { theta, outer_set: outer_set(&m, &h)?, instrument: h.columns })
        }
        None => None,
    };
    let rep = IntersectReport {
        moments: m.clone(),
        cells,
        gamma_lower: sb.gamma_lower,
        gamma_upper: sb.gamma_upper,
        identified_set: sb.identified_set(),
        mrb,
        mass_conditions: MassConditions { lower, upper },
        w,
        point_id,
    };
    let oracle = if g.oracle { Some(oracle_digest(&m, &rep)?) } else { None };
    let md = markdown(&rep, sb.refuted);
    let env = Envelope {
        schema: crate::report::SCHEMA,
        command: "intersect",
        seed: g.seed,
        refuted: sb.refuted,
        result: rep,
        oracle,
    };
    Rendered::new(&env, md)
}

fn oracle_digest(m: &BoundsMoments, rep: &IntersectReport) -> CliResult<serde_json::Value> {
    let cfg = OracleConfig::default();
    let grid = oracle_intersection_idset(m, cfg.grid_step_1d)?;
    let mut p = [0.0];
    let disagreements = (0..grid.len())
        .filter(|&i| {
            grid.point_into(i, &mut p);
            grid.is_marked(i) != rep.identified_set.contains(p[0])
        })
        .count();
    let mut digest = json!({
        "grid_step": cfg.grid_step_1d,
        "identified_set_disagreements": disagreements,
    });
    if rep.identified_set.is_empty() {
        let sweep = oracle_mrb_by_instrument_sweep(m, &cfg)?;
        let marked: Vec<f64> = sweep.marked_points().map(|p| p[0]).collect();
        let axis = &sweep.axes()[0];
        let step = if axis.len() > 1 { axis[1] - axis[0] } else { 0.0 };
        let (lo, hi) = (marked.first().copied(), marked.last().copied());
        let agrees = match (lo, hi) {
            (Some(lo), Some(hi)) => (lo - rep.mrb.lo).abs() <= 2.0 * step && (hi - rep.mrb.hi).abs() <= 2.0 * step,
            _ => false,
        };
        digest["sweep_resolution"] = json!(cfg.instrument_sweep_resolution);
        digest["sweep_step"] = json!(step);
        digest["sweep_closure"] = json!([lo, hi]);
        digest["mrb_agrees_within_two_steps"] = json!(agrees);
    }
    Ok(digest)
}

fn markdown(r: &IntersectReport, refuted: bool) -> String {
    let mut rows = vec![
        vec!["γ̲ = max E[Y̲|Z]".to_string(), real(r.gamma_lower)],
        vec!["γ̄ = min E[Ȳ|Z]".to_string(), real(r.gamma_upper)],
        vec!["Identified set".to_string(), interval(&r.identified_set)],
        vec!["Refuted".to_string(), yes_no(refuted).to_string()],
        vec!["MRB".to_string(), interval(&r.mrb)],
    ];
    if let Some(p) = &r.point_id {
        rows.push(vec![format!("Outer set of the instrument for θ = {}", real(p.theta)), interval(&p.outer_set)]);
    }
    format!("# Intersection bounds\n\n{}", table(&["Quantity", "Value"], &rows))
}

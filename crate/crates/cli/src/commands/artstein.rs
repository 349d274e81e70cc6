//! `mrb artstein`: outer and sharp sets of finite-outcome random-set models.

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use serde_json::json;

use mrb_core::artstein::{
    find_discordant_collections, CapacitySpec, DiscordanceSearch, InequalityTable, RandomSetCapacity, Scenario,
};
use mrb_core::oracles::oracle_artstein_sharp;
use mrb_core::setcore::GridSet;

use super::yes_no;
use crate::error::{CliError, CliResult};
use crate::ingest;
use crate::report::{grid, table, Envelope, Rendered};
use crate::Globals;

#[derive(Debug, Clone, Args)]
pub struct ArtsteinArgs {
    /// Scenario description (JSON).
    #[arg(long)]
    pub scenario: PathBuf,
}

#[derive(Debug, Clone, Serialize)]
struct CollectionReport {
    sets: Vec<Vec<String>>,
    outer_set: GridSet,
    volume: f64,
}

#[derive(Debug, Clone, Serialize)]
struct ArtsteinReport {
    outcomes: Vec<String>,
    covariates: Vec<String>,
    sharp_set: GridSet,
    sharp_volume: f64,
    collections: Vec<CollectionReport>,
    discordance: DiscordanceSearch,
}

pub fn run(a: &ArtsteinArgs, g: &Globals) -> CliResult<Rendered> {
    let sc: Scenario = ingest::read_json(&a.scenario)?;
    let model = sc.build(g.seed).map_err(|e| CliError::from_input(&a.scenario, e))?;
    model.spot_check()?;
    let ineq = InequalityTable::build(&model)?;
    let all: Vec<u32> = (1..=model.full_mask()).collect();
    let sharp = ineq.outer_set(&all)?;
    let collections = sc
        .collections
        .iter()
        .map(|c| {
            let masks = c.iter().map(|k| sc.mask(k)).collect::<mrb_core::Result<Vec<_>>>()?;
            let outer = ineq.outer_set(&masks)?;
            Ok(CollectionReport { sets: c.clone(), volume: outer.volume_fraction(), outer_set: outer })
        })
        .collect::<mrb_core::Result<Vec<_>>>()
        .map_err(|e| CliError::from_input(&a.scenario, e))?;
    let discordance = find_discordant_collections(&model)?;
    let refuted = sharp.is_empty();
    let oracle = if g.oracle { Some(oracle_digest(&sc, &model, &sharp)?) } else { None };
    let rep = ArtsteinReport {
        outcomes: model.y_labels.clone(),
        covariates: model.x_labels.clone(),
        sharp_volume: sharp.volume_fraction(),
        sharp_set: sharp,
        collections,
        discordance,
    };
    let md = markdown(&rep);
    let env =
        Envelope { schema: crate::report::SCHEMA, command: "artstein", seed: g.seed, refuted, result: rep, oracle };
    Rendered::new(&env, md)
}

fn oracle_digest(
    sc: &Scenario,
    model: &mrb_core::artstein::FiniteCapacityModel,
    sharp: &GridSet,
) -> CliResult<serde_json::Value> {
    let CapacitySpec::RandomSet { .. } = &sc.capacity else {
        return Ok(json!({ "skipped": "the selection oracle needs an explicit random-set law" }));
    };
    if model.y_labels.len() > 3 {
        return Ok(json!({ "skipped": "the selection oracle is limited to at most three outcomes" }));
    }
    let laws = match &sc.capacity {
        CapacitySpec::RandomSet { laws } => laws,
        _ => unreachable!(),
    };
    let focal = laws
        .iter()
        .map(|law| {
            law.iter()
                .map(|f| {
                    Ok(mrb_core::artstein::FocalSet {
                        set: sc.mask(&f.set)?,
                        intercept: f.intercept,
                        slope: f.slope.clone(),
                    })
                })
                .collect::<mrb_core::Result<Vec<_>>>()
        })
        .collect::<mrb_core::Result<Vec<_>>>()?;
    let cap = RandomSetCapacity::new(model.y_labels.len(), focal)?;
    let oracle =
        oracle_artstein_sharp(|x, t| cap.focal_probabilities(x, t), &model.p_y_given_x, model.theta_axes.clone())?;
    let disagreements = oracle.mask().iter().zip(sharp.mask()).filter(|(a, b)| a != b).count();
    Ok(json!({ "selection_grid_disagreements": disagreements }))
}

fn markdown(r: &ArtsteinReport) -> String {
    let mut rows = vec![
        vec!["Sharp set".to_string(), grid(&r.sharp_set)],
        vec!["Sharp set volume fraction".to_string(), format!("{:.4}", r.sharp_volume)],
    ];
    for c in &r.collections {
        let names: Vec<String> = c.sets.iter().map(|s| format!("{{{}}}", s.join(","))).collect();
        rows.push(vec![format!("Outer set for {}", names.join(", ")), grid(&c.outer_set)]);
    }
    let p = &r.discordance.prechecks;
    rows.push(vec!["Positive outcome probabilities".to_string(), yes_no(p.positive_probabilities).to_string()]);
    rows.push(vec!["Saturating grid".to_string(), yes_no(p.saturating_grid).to_string()]);
    if let Some(c) = &r.discordance.certificate {
        let fmt = |v: &[mrb_core::artstein::SetAtX]| {
            v.iter().map(|s| format!("{{{}}} at {}", s.set.join(","), s.x)).collect::<Vec<_>>().join(", ")
        };
        rows.push(vec![
            "Discordant collections".to_string(),
            format!("{}: {} vs {}: {}", fmt(&c.collection_a), grid(&c.set_a), fmt(&c.collection_b), grid(&c.set_b)),
        ]);
    }
    if let Some(d) = &r.discordance.diagnostic {
        rows.push(vec!["Diagnostic".to_string(), d.clone()]);
    }
    format!("# Artstein inequalities\n\n{}", table(&["Quantity", "Value"], &rows))
}

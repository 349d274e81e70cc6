//! Falsification adaptive set for interval families with additive slack.
//!
//! Relaxing atom `[l_a, u_a]` by slack `δ` gives `[l_a - δ⁻_a, u_a + δ⁺_a]`
//! on the endpoints allowed to move. For a candidate value `θ` the smallest
//! slack vector admitting it is `δ⁻_a = max(0, l_a - θ)`,
//! `δ⁺_a = max(0, θ - u_a)`. A value belongs to the falsification adaptive
//! set exactly when that vector is Pareto-minimal among all slack vectors
//! restoring consistency, and such a vector is always the minimal vector of
//! some value, so comparing values pairwise decides membership.

use serde::{Deserialize, Serialize};

use super::family::AssumptionFamily;
use crate::error::{Error, Result};
use crate::setcore::{axis_by_step, GridSet, IdentifiedSet, Interval1D, TOL};

/// Which endpoints of an interval atom may be relaxed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlackDir {
    Lower,
    Upper,
    Both,
}

impl SlackDir {
    fn lower(self) -> bool {
        matches!(self, SlackDir::Lower | SlackDir::Both)
    }
    fn upper(self) -> bool {
        matches!(self, SlackDir::Upper | SlackDir::Both)
    }
}

/// An interval family together with the endpoints each atom may relax.
#[derive(Debug, Clone)]
pub struct SlackFamily {
    pub base: AssumptionFamily,
    pub slack_dirs: Vec<SlackDir>,
    /// Grid step used when no closed form applies.
    pub grid_step: f64,
}

impl SlackFamily {
    /// Every endpoint of every atom may relax.
    pub fn both_sides(base: AssumptionFamily) -> Self {
        let n = base.len();
        SlackFamily { base, slack_dirs: vec![SlackDir::Both; n], grid_step: 1e-3 }
    }

    fn atoms(&self) -> Result<Vec<Interval1D>> {
        if !self.base.is_intersection_rule() {
            return Err(Error::Unsupported("slack families need interval atoms under the intersection rule".into()));
        }
        if self.slack_dirs.len() != self.base.len() {
            return Err(Error::Invalid("one slack direction per atom is required".into()));
        }
        self.base
            .atom_sets()
            .iter()
            .map(|s| match s {
                IdentifiedSet::Interval(iv) if !iv.is_empty() => Ok(*iv),
                _ => Err(Error::Unsupported("falsification adaptive sets need nonempty interval atoms".into())),
            })
            .collect()
    }
}

/// Minimal slack vector admitting `θ`, or `None` when a fixed endpoint excludes it.
fn minimal_slack(atoms: &[Interval1D], dirs: &[SlackDir], theta: f64) -> Option<Vec<f64>> {
    let mut out = Vec::with_capacity(2 * atoms.len());
    for (iv, d) in atoms.iter().zip(dirs) {
        let below = (iv.lo - theta).max(0.0);
        let above = (theta - iv.hi).max(0.0);
        if d.lower() {
            out.push(below);
        } else if !(Interval1D::new(iv.lo, f64::INFINITY, iv.lo_open, true).contains(theta)) {
            return None;
        }
        if d.upper() {
            out.push(above);
        } else if !(Interval1D::new(f64::NEG_INFINITY, iv.hi, true, iv.hi_open).contains(theta)) {
            return None;
        }
    }
    Some(out)
}

fn dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if *x > *y + TOL {
            return false;
        }
        if *x < *y - TOL {
            strict = true;
        }
    }
    strict
}

/// The falsification adaptive set `Θ†`.
///
/// With every endpoint relaxable the set is the interval between
/// `max_a l_a` and `min_a u_a` (in whichever order they come), which equals
/// the identified set when the family is consistent. Other slack patterns
/// are resolved on a grid of step `sf.grid_step`.
pub fn falsification_adaptive_set(sf: &SlackFamily) -> Result<IdentifiedSet> {
    let atoms = sf.atoms()?;
    if atoms.is_empty() {
        return Ok(sf.base.space().clone());
    }
    if sf.slack_dirs.iter().all(|d| *d == SlackDir::Both) {
        let full = sf.base.identified_set(sf.base.full())?;
        if !full.is_empty()? {
            return Ok(full);
        }
        let l = atoms.iter().map(|iv| iv.lo).fold(f64::NEG_INFINITY, f64::max);
        let u = atoms.iter().map(|iv| iv.hi).fold(f64::INFINITY, f64::min);
        return Ok(Interval1D::closed(l.min(u), l.max(u)).into());
    }
    Ok(fas_on_grid(sf, &atoms)?.into())
}

/// Grid evaluation of the falsification adaptive set (any slack pattern).
pub fn falsification_adaptive_grid(sf: &SlackFamily) -> Result<GridSet> {
    let atoms = sf.atoms()?;
    fas_on_grid(sf, &atoms)
}

fn fas_on_grid(sf: &SlackFamily, atoms: &[Interval1D]) -> Result<GridSet> {
    let lo = atoms.iter().map(|iv| iv.lo).fold(f64::INFINITY, f64::min);
    let hi = atoms.iter().map(|iv| iv.hi).fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Unsupported("grid evaluation needs bounded atoms".into()));
    }
    let axis = axis_by_step(lo, hi.max(lo), sf.grid_step);
    let slacks: Vec<Option<Vec<f64>>> = axis.iter().map(|&t| minimal_slack(atoms, &sf.slack_dirs, t)).collect();
    let mask = slacks
        .iter()
        .map(|si| match si {
            None => false,
            Some(v) => !slacks.iter().flatten().any(|w| dominates(w, v)),
        })
        .collect();
    GridSet::new(vec![axis], mask)
}

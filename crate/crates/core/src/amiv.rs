//! Adaptive monotone instrumental variables.
//!
//! The instrument takes ordered values `1, ..., k` (stored as indices
//! `0, ..., k-1`). Assumption `a_z` bounds the potential outcomes,
//! imposes mean independence and makes `Y_dz'` nondecreasing in `z'` up
//! to the cutoff `z` and flat afterwards; `a†` keeps only the bounds and
//! mean independence. `a_1` is the classic mean-independence model and
//! `a_k` implies the monotone-IV model. The parameter is `(θ1, θ0)` with
//! `θ_d = E[Y_d]`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::data::AMIVMoments;
use crate::error::{Error, Result};
use crate::lattice::{AssumptionFamily, SubmodelOracle, Subset};
use crate::setcore::{BoxKD, IdentifiedSet, Interval1D};

/// Whether cutoffs are shared across treatments or chosen per treatment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutoffMode {
    Joint,
    PerOutcome,
}

/// Whether `a_z` (1-based `z`) is data-consistent for treatment `d`.
///
/// Requires `max(q̲_dt: t ≤ z') ≤ min(q̄_dt: t ≥ z')` for every `z' < z`
/// and `max(q̲_dt: all t) ≤ min(q̄_dt: t ≥ z)`.
pub fn amiv_star_membership(m: &AMIVMoments, z: usize, d: usize) -> bool {
    let k = m.k();
    assert!((1..=k).contains(&z) && d < 2, "cutoff must lie in 1..=k and treatment in {{0, 1}}");
    let lo = &m.q_lower[d];
    let hi = &m.q_upper[d];
    let prefix_max = |t: usize| lo[..=t].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let suffix_min = |t: usize| hi[t..].iter().copied().fold(f64::INFINITY, f64::min);
    let early = (0..z - 1).all(|t| prefix_max(t) <= suffix_min(t));
    early && prefix_max(k - 1) <= suffix_min(z - 1)
}

/// Membership of `a_z` in the joint-cutoff model: consistent for both treatments.
pub fn amiv_star_membership_joint(m: &AMIVMoments, z: usize) -> bool {
    amiv_star_membership(m, z, 0) && amiv_star_membership(m, z, 1)
}

/// `Γ_{d,z*}` for a 1-based cutoff `z*`.
pub fn gamma(m: &AMIVMoments, d: usize, z_star: usize) -> Interval1D {
    let k = m.k();
    let lo = &m.q_lower[d];
    let hi = &m.q_upper[d];
    let p = &m.z_weights;
    let max_all = lo.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let flat_hi = hi[z_star - 1..].iter().copied().fold(f64::INFINITY, f64::min);
    let mut lower = 0.0;
    let mut upper = 0.0;
    for t in 0..k {
        if t + 1 < z_star {
            lower += p[t] * lo[..=t].iter().copied().fold(f64::NEG_INFINITY, f64::max);
            upper += p[t] * hi[t..].iter().copied().fold(f64::INFINITY, f64::min);
        } else {
            lower += p[t] * max_all;
            upper += p[t] * flat_hi;
        }
    }
    Interval1D::closed(lower, upper)
}

/// `[E Y̲_d, E Ȳ_d]`, the identified set under bounds and mean independence of each `Y_dz` alone.
pub fn fallback_interval(m: &AMIVMoments, d: usize) -> Interval1D {
    let lo = m.z_weights.iter().zip(&m.q_lower[d]).map(|(p, q)| p * q).sum();
    let hi = m.z_weights.iter().zip(&m.q_upper[d]).map(|(p, q)| p * q).sum();
    Interval1D::closed(lo, hi)
}

/// Identified set of `θ_d` under `a_z` alone: `Γ_{d,z}` when consistent, else empty.
pub fn identified_interval(m: &AMIVMoments, d: usize, z: usize) -> Interval1D {
    if amiv_star_membership(m, z, d) {
        gamma(m, d, z)
    } else {
        Interval1D::empty()
    }
}

/// Output of the adaptive monotone IV analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AMIVResult {
    pub mode: CutoffMode,
    /// Joint-mode membership of `a_1, ..., a_k` in the minimum relaxation.
    pub star_members: Vec<bool>,
    /// Per-treatment membership, indexed `[d][z-1]`.
    pub star_members_by_d: [Vec<bool>; 2],
    /// Cutoff applied to each treatment (1-based); `None` when no `a_z` survives.
    pub z_star: [Option<usize>; 2],
    /// Intervals of the misspecification-robust bound, indexed by treatment: `[θ0, θ1]`.
    pub gamma: [Interval1D; 2],
    /// Mean-independence bounds (`a_1`) by treatment, empty for a treatment that refutes it.
    pub mi: [Interval1D; 2],
    /// Monotone-IV bounds (`a_k`) by treatment, empty for a treatment that refutes it.
    pub miv: [Interval1D; 2],
}

impl AMIVResult {
    /// The MRB as a box over `(θ1, θ0)`.
    pub fn mrb(&self) -> BoxKD {
        BoxKD::new(vec![self.gamma[1], self.gamma[0]])
    }

    /// The mean-independence box.
    pub fn mi_box(&self) -> BoxKD {
        BoxKD::new(vec![self.mi[1], self.mi[0]])
    }

    /// The monotone-IV box.
    pub fn miv_box(&self) -> BoxKD {
        BoxKD::new(vec![self.miv[1], self.miv[0]])
    }

    /// `[Γ1.lo - Γ0.hi, Γ1.hi - Γ0.lo]`.
    pub fn ate(&self) -> Interval1D {
        ate_interval(&self.gamma[1], &self.gamma[0])
    }
}

/// Interval difference `θ1 - θ0`; empty when either side is.
pub fn ate_interval(t1: &Interval1D, t0: &Interval1D) -> Interval1D {
    if t1.is_empty() || t0.is_empty() {
        Interval1D::empty()
    } else {
        Interval1D::closed(t1.lo - t0.hi, t1.hi - t0.lo)
    }
}

/// Minimum relaxation, cutoffs and bounds in the given mode.
pub fn amiv_mrb(m: &AMIVMoments, mode: CutoffMode) -> AMIVResult {
    let k = m.k();
    let by_d: [Vec<bool>; 2] = [0, 1].map(|d| (1..=k).map(|z| amiv_star_membership(m, z, d)).collect());
    let star_members: Vec<bool> = (0..k).map(|i| by_d[0][i] && by_d[1][i]).collect();
    let first = |v: &[bool]| v.iter().position(|&b| b).map(|i| i + 1);
    let z_star = match mode {
        CutoffMode::Joint => {
            let z = first(&star_members);
            [z, z]
        }
        CutoffMode::PerOutcome => [first(&by_d[0]), first(&by_d[1])],
    };
    let gamma = [0, 1].map(|d| match z_star[d] {
        Some(z) => gamma(m, d, z),
        None => fallback_interval(m, d),
    });
    let mi = [0, 1].map(|d| identified_interval(m, d, 1));
    let miv = [0, 1].map(|d| identified_interval(m, d, k));
    AMIVResult { mode, star_members, star_members_by_d: by_d, z_star, gamma, mi, miv }
}

/// Identified sets of sub-families of `{a_1, ..., a_k, a†}` over `(θ1, θ0)`.
///
/// Labels are `a1..ak` followed by `adag`. Because `a_z` implies `a_z'` for
/// `z' > z` and every `a_z` implies `a†`, a sub-family identifies what its
/// smallest cutoff identifies.
#[derive(Debug, Clone)]
pub struct AmivOracle {
    moments: AMIVMoments,
}

impl SubmodelOracle for AmivOracle {
    fn identified_set(&self, members: Subset) -> Result<IdentifiedSet> {
        let k = self.moments.k();
        let smallest = members.indices().into_iter().find(|&i| i < k);
        let dims: Vec<Interval1D> = [1, 0]
            .iter()
            .map(|&d| match smallest {
                Some(i) => identified_interval(&self.moments, d, i + 1),
                None => fallback_interval(&self.moments, d),
            })
            .collect();
        Ok(BoxKD::new(dims).into())
    }
}

/// The assumption family `{a_1, ..., a_k, a†}` with the closed-form sub-model sets.
pub fn amiv_family(m: &AMIVMoments) -> Result<AssumptionFamily> {
    let k = m.k();
    let mut ids: Vec<String> = (1..=k).map(|z| format!("a{z}")).collect();
    ids.push("adag".into());
    let space =
        BoxKD::new(vec![Interval1D::closed(m.y_min[1], m.y_max[1]), Interval1D::closed(m.y_min[0], m.y_max[0])]);
    AssumptionFamily::custom(ids, space.into(), Arc::new(AmivOracle { moments: m.clone() }))
}

/// Moments from micro rows `(y, d, z)` with integer instrument values ordered ascending.
///
/// `Y̲_d = Y 1(D = d) + y̲_d 1(D ≠ d)` and `Ȳ_d = Y 1(D = d) + ȳ_d 1(D ≠ d)`.
pub fn moments_from_rows(
    rows: &[(f64, u8, i64)],
    y_min: [f64; 2],
    y_max: [f64; 2],
    min_count: usize,
) -> Result<AMIVMoments> {
    let mut cells: BTreeMap<i64, (usize, [f64; 2], [f64; 2])> = BTreeMap::new();
    for &(y, d, z) in rows {
        if d > 1 {
            return Err(Error::Invalid(format!("treatment must be 0 or 1, found {d}")));
        }
        let dd = d as usize;
        if !(y_min[dd] <= y && y <= y_max[dd]) {
            return Err(Error::Invalid(format!("outcome {y} outside the declared support for treatment {d}")));
        }
        let c = cells.entry(z).or_insert((0, [0.0; 2], [0.0; 2]));
        c.0 += 1;
        for t in 0..2 {
            let (l, u) = if t == dd { (y, y) } else { (y_min[t], y_max[t]) };
            c.1[t] += l;
            c.2[t] += u;
        }
    }
    let n = rows.len();
    if n == 0 {
        return Err(Error::Invalid("no observations".into()));
    }
    let mut w = Vec::new();
    let mut lo = [Vec::new(), Vec::new()];
    let mut hi = [Vec::new(), Vec::new()];
    for (z, (count, sl, su)) in cells {
        if count < min_count.max(1) {
            return Err(Error::Cell { label: z.to_string(), count, min: min_count.max(1) });
        }
        w.push(count as f64 / n as f64);
        for t in 0..2 {
            lo[t].push(sl[t] / count as f64);
            hi[t].push(su[t] / count as f64);
        }
    }
    let total: f64 = w.iter().sum();
    for x in &mut w {
        *x /= total;
    }
    AMIVMoments::new(w, lo, hi, y_min, y_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::find_minimal_relaxations;

    fn worked() -> AMIVMoments {
        AMIVMoments::new(
            vec![0.5, 0.5],
            [vec![0.1, 0.1], vec![0.3, 0.5]],
            [vec![0.9, 0.9], vec![0.45, 0.9]],
            [0.0; 2],
            [1.0; 2],
        )
        .unwrap()
    }

    #[test]
    fn membership_examples() {
        let m = worked();
        assert!(!amiv_star_membership(&m, 1, 1));
        assert!(amiv_star_membership(&m, 2, 1));
        let vac = AMIVMoments::new(
            vec![0.5, 0.5],
            [vec![0.0; 2], vec![0.0; 2]],
            [vec![1.0; 2], vec![1.0; 2]],
            [0.0; 2],
            [1.0; 2],
        )
        .unwrap();
        assert!((1..=2).all(|z| amiv_star_membership_joint(&vac, z)));
    }

    #[test]
    fn worked_example_gamma() {
        let r = amiv_mrb(&worked(), CutoffMode::Joint);
        assert_eq!(r.z_star, [Some(2), Some(2)]);
        assert_eq!(r.gamma[1], Interval1D::closed(0.40, 0.675));
        assert_eq!(r.star_members, vec![false, true]);
        assert!(r.mi[1].is_empty() && !r.mi[0].is_empty());
    }

    #[test]
    fn consistent_mi_case_collapses_to_manski_bounds() {
        let q = [vec![0.2, 0.3], vec![0.2, 0.3]];
        let m = AMIVMoments::new(vec![0.5, 0.5], q, [vec![0.6, 0.5], vec![0.6, 0.5]], [0.0; 2], [1.0; 2]).unwrap();
        let r = amiv_mrb(&m, CutoffMode::Joint);
        assert_eq!(r.z_star, [Some(1), Some(1)]);
        assert_eq!(r.gamma[1], Interval1D::closed(0.3, 0.5));
        assert_eq!(r.gamma, r.mi);
        assert!(r.mi_box().is_subset_of(&r.miv_box()));
    }

    #[test]
    fn fallback_when_no_cutoff_survives() {
        let m = AMIVMoments::new(
            vec![0.5, 0.5],
            [vec![0.1, 0.1], vec![0.9, 0.1]],
            [vec![0.9, 0.9], vec![0.95, 0.2]],
            [0.0; 2],
            [1.0; 2],
        )
        .unwrap();
        assert!(!amiv_star_membership(&m, 2, 1));
        let r = amiv_mrb(&m, CutoffMode::Joint);
        assert_eq!(r.z_star, [None, None]);
        assert_eq!(r.gamma[1], Interval1D::closed(0.5, 0.575));
        let per = amiv_mrb(&m, CutoffMode::PerOutcome);
        assert_eq!(per.z_star, [Some(1), None]);
        assert_eq!(per.gamma[0], Interval1D::closed(0.1, 0.9));
    }

    #[test]
    fn lattice_finds_the_unique_relaxation() {
        let fam = amiv_family(&worked()).unwrap();
        let r = find_minimal_relaxations(&fam).unwrap();
        assert_eq!(r.relaxation_labels(), vec![vec!["a2", "adag"]]);
        assert!(r.flags.unique_minimal);
    }

    #[test]
    fn ate_is_interval_difference() {
        let r = amiv_mrb(&worked(), CutoffMode::Joint);
        let a = r.ate();
        assert!((a.lo - (0.4 - r.gamma[0].hi)).abs() < 1e-15 && (a.hi - (0.675 - r.gamma[0].lo)).abs() < 1e-15);
    }

    #[test]
    fn micro_rows_adapter() {
        let rows = vec![(1.0, 1, 1), (0.0, 0, 1), (0.5, 1, 2), (0.25, 0, 2)];
        let m = moments_from_rows(&rows, [0.0; 2], [1.0; 2], 1).unwrap();
        assert_eq!(m.z_weights, vec![0.5, 0.5]);
        assert_eq!(m.q_lower[1], vec![0.5, 0.25]);
        assert_eq!(m.q_upper[1], vec![1.0, 0.75]);
        assert_eq!(m.q_lower[0], vec![0.0, 0.125]);
        assert_eq!(m.q_upper[0], vec![0.5, 0.625]);
    }
}

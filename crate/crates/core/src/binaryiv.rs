//! Binary instrumental variable model with potential outcomes `Y_dz`.
//!
//! Assumptions: `a1` independence `Y_dz ⊥ Z`, `a2` `Y11 ≥ Y10`, `a3`
//! `Y11 ≤ Y10`, `a4` `Y01 ≥ Y00`, `a5` `Y01 ≤ Y00`. Together `a2..a5`
//! are the exclusion restriction. The parameter is
//! `θ = (θ11, θ10, θ01, θ00)` with `θ_dz = E[Y_dz]`, stored in that
//! coordinate order.

use serde::{Deserialize, Serialize};

use crate::data::BinaryIVData;
use crate::error::{Error, Result};
use crate::lattice::Subset;
use crate::setcore::HPolytope;

/// Coordinate of `θ11`.
pub const T11: usize = 0;
/// Coordinate of `θ10`.
pub const T10: usize = 1;
/// Coordinate of `θ01`.
pub const T01: usize = 2;
/// Coordinate of `θ00`.
pub const T00: usize = 3;

/// Labels of the five assumptions.
pub const ASSUMPTIONS: [&str; 5] = ["a1", "a2", "a3", "a4", "a5"];

/// One of the four instrumental inequalities evaluated on data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    /// Left-hand side of `LHS ≤ 1`.
    pub lhs: f64,
    /// `1 - LHS`.
    pub slack: f64,
    pub holds: bool,
}

/// Evaluates
/// `q11(1) + q01(0) ≤ 1`, `q11(0) + q01(1) ≤ 1`,
/// `q10(1) + q00(0) ≤ 1`, `q10(0) + q00(1) ≤ 1`, in that order.
pub fn instrumental_inequalities(d: &BinaryIVData) -> [InequalityCheck; 4] {
    let lhs = [
        d.q(1, 1, 1) + d.q(0, 1, 0),
        d.q(1, 1, 0) + d.q(0, 1, 1),
        d.q(1, 0, 1) + d.q(0, 0, 0),
        d.q(1, 0, 0) + d.q(0, 0, 1),
    ];
    lhs.map(|l| InequalityCheck { lhs: l, slack: 1.0 - l, holds: l <= 1.0 + 1e-12 })
}

/// Subset of `{a1, ..., a5}` from assumption numbers `1..=5`.
pub fn combo(numbers: &[usize]) -> Subset {
    Subset::from_indices(&numbers.iter().map(|n| n - 1).collect::<Vec<_>>())
}

/// The nine combinations with closed-form identified sets, in case-table order.
pub fn supported_combos() -> [Subset; 9] {
    [
        combo(&[1, 2, 3, 4, 5]),
        combo(&[1, 2, 4, 5]),
        combo(&[1, 3, 4, 5]),
        combo(&[1, 2, 3, 4]),
        combo(&[1, 2, 3, 5]),
        combo(&[1, 2, 5]),
        combo(&[1, 2, 4]),
        combo(&[1, 3, 5]),
        combo(&[1, 3, 4]),
    ]
}

fn combo_label(s: Subset) -> String {
    format!("{{{}}}", s.indices().iter().map(|i| ASSUMPTIONS[*i]).collect::<Vec<_>>().join(","))
}

fn unit(i: usize, v: f64) -> Vec<f64> {
    let mut c = vec![0.0; 4];
    c[i] = v;
    c
}

fn diff(hi: usize, lo: usize) -> Vec<f64> {
    let mut c = vec![0.0; 4];
    c[hi] = 1.0;
    c[lo] = -1.0;
    c
}

/// `lo ≤ θ_i ≤ hi`.
fn bound(p: &mut HPolytope, i: usize, lo: f64, hi: f64) {
    p.push_le(unit(i, -1.0), -lo);
    p.push_le(unit(i, 1.0), hi);
}

/// `sup_z q_{1d}(z) ≤ θ_d0 = θ_d1 ≤ 1 - sup_z q_{0d}(z)`.
fn excluded_block(p: &mut HPolytope, d: &BinaryIVData, t: usize) {
    let (a, b, j) = if t == 1 { (T11, T10, 1) } else { (T01, T00, 0) };
    let lo = d.q(1, j, 0).max(d.q(1, j, 1));
    let hi = 1.0 - d.q(0, j, 0).max(d.q(0, j, 1));
    p.push_eq(diff(b, a), 0.0);
    bound(p, b, lo, hi);
    bound(p, a, lo, hi);
}

/// `q_{1d}(z) ≤ θ_dz ≤ 1 - q_{0d}(z)` for both `z`.
fn arm_boxes(p: &mut HPolytope, d: &BinaryIVData, t: usize) {
    let (a, b, j) = if t == 1 { (T11, T10, 1) } else { (T01, T00, 0) };
    bound(p, b, d.q(1, j, 0), 1.0 - d.q(0, j, 0));
    bound(p, a, d.q(1, j, 1), 1.0 - d.q(0, j, 1));
}

/// `θ_d1 - θ_d0 ≥ max{0, c}`.
fn acde_at_least(p: &mut HPolytope, t: usize, c: f64) {
    let (a, b) = if t == 1 { (T11, T10) } else { (T01, T00) };
    p.push_le(diff(b, a), 0.0);
    p.push_le(diff(b, a), -c);
}

/// `θ_d1 - θ_d0 ≤ min{0, c}`.
fn acde_at_most(p: &mut HPolytope, t: usize, c: f64) {
    let (a, b) = if t == 1 { (T11, T10) } else { (T01, T00) };
    p.push_le(diff(a, b), 0.0);
    p.push_le(diff(a, b), c);
}

/// Closed-form identified set of one of the nine supported combinations.
pub fn identified_set_for(d: &BinaryIVData, combo_set: Subset) -> Result<HPolytope> {
    let q = |i, j, z| d.q(i, j, z);
    let ii1 = q(1, 1, 1) + q(0, 1, 0) - 1.0;
    let ii2 = 1.0 - q(0, 1, 1) - q(1, 1, 0);
    let ii3 = q(1, 0, 1) + q(0, 0, 0) - 1.0;
    let ii4 = 1.0 - q(0, 0, 1) - q(1, 0, 0);
    let mut p = HPolytope::whole(4);
    let case = supported_combos().iter().position(|c| *c == combo_set).ok_or_else(|| Error::UnsupportedCombo {
        given: combo_label(combo_set),
        supported: supported_combos().iter().map(|c| combo_label(*c)).collect::<Vec<_>>().join(", "),
    })?;
    match case {
        0 => {
            excluded_block(&mut p, d, 1);
            excluded_block(&mut p, d, 0);
        }
        1 => {
            arm_boxes(&mut p, d, 1);
            acde_at_least(&mut p, 1, ii1);
            excluded_block(&mut p, d, 0);
        }
        2 => {
            arm_boxes(&mut p, d, 1);
            acde_at_most(&mut p, 1, ii2);
            excluded_block(&mut p, d, 0);
        }
        3 => {
            arm_boxes(&mut p, d, 0);
            acde_at_least(&mut p, 0, ii3);
            excluded_block(&mut p, d, 1);
        }
        4 => {
            arm_boxes(&mut p, d, 0);
            acde_at_most(&mut p, 0, ii4);
            excluded_block(&mut p, d, 1);
        }
        5 => {
            arm_boxes(&mut p, d, 1);
            acde_at_least(&mut p, 1, ii1);
            p.push_le(diff(T11, T10), ii2);
            arm_boxes(&mut p, d, 0);
            acde_at_most(&mut p, 0, ii4);
        }
        6 => {
            arm_boxes(&mut p, d, 1);
            acde_at_least(&mut p, 1, ii1);
            arm_boxes(&mut p, d, 0);
            acde_at_least(&mut p, 0, ii3);
        }
        7 => {
            arm_boxes(&mut p, d, 1);
            acde_at_most(&mut p, 1, ii2);
            arm_boxes(&mut p, d, 0);
            acde_at_most(&mut p, 0, ii4);
        }
        _ => {
            arm_boxes(&mut p, d, 1);
            acde_at_most(&mut p, 1, ii2);
            arm_boxes(&mut p, d, 0);
            acde_at_least(&mut p, 0, ii3);
        }
    }
    Ok(p)
}

/// Sign of an average causal direct effect `ACDE(d) = θ_d1 - θ_d0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AcdeDirection {
    /// `ACDE(d) = 0` (exclusion maintained for `d`).
    Zero,
    /// `ACDE(d) ≥ bound`.
    AtLeast,
    /// `ACDE(d) ≤ bound`.
    AtMost,
}

/// A statement about `ACDE(d)` implied by the selected relaxation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcdeStatement {
    pub d: u8,
    pub direction: AcdeDirection,
    pub bound: f64,
}

/// The fired row of the case table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinaryIVMrb {
    /// Row number `1..=9`.
    pub case: usize,
    /// Assumptions kept by the minimum data-consistent relaxation.
    pub kept: Vec<String>,
    /// Assumptions dropped from the full model.
    pub dropped: Vec<String>,
    pub set: HPolytope,
    pub acde: Vec<AcdeStatement>,
}

/// Selects the case-table row from the pattern of violated instrumental inequalities.
///
/// Only the pattern with no violation and the four single-violation
/// patterns can occur: for any two of the inequalities the left-hand sides
/// add up to a sum of conditional probabilities that is at most 2, so two
/// of them cannot both exceed 1. Other patterns are reported as
/// unsupported rather than guessed.
pub fn mrb_binary_iv(d: &BinaryIVData) -> Result<BinaryIVMrb> {
    let checks = instrumental_inequalities(d);
    let violated: Vec<usize> = (0..4).filter(|&i| !checks[i].holds).collect();
    let zero = |t: u8| AcdeStatement { d: t, direction: AcdeDirection::Zero, bound: 0.0 };
    let (case, acde) = match violated.as_slice() {
        [] => (1, vec![zero(1), zero(0)]),
        [0] => {
            (2, vec![AcdeStatement { d: 1, direction: AcdeDirection::AtLeast, bound: checks[0].lhs - 1.0 }, zero(0)])
        }
        [1] => (3, vec![AcdeStatement { d: 1, direction: AcdeDirection::AtMost, bound: checks[1].slack }, zero(0)]),
        [2] => {
            (4, vec![zero(1), AcdeStatement { d: 0, direction: AcdeDirection::AtLeast, bound: checks[2].lhs - 1.0 }])
        }
        [3] => (5, vec![zero(1), AcdeStatement { d: 0, direction: AcdeDirection::AtMost, bound: checks[3].slack }]),
        _ => {
            let names: Vec<String> = violated.iter().map(|i| format!("II{}", i + 1)).collect();
            return Err(Error::UnsupportedPattern(format!(
                "violated inequalities {} have no unique row in the case table",
                names.join(", ")
            )));
        }
    };
    let kept_set = supported_combos()[case - 1];
    let kept = kept_set.indices().iter().map(|&i| ASSUMPTIONS[i].to_string()).collect();
    let dropped = (0..5).filter(|&i| !kept_set.contains(i)).map(|i| ASSUMPTIONS[i].to_string()).collect();
    Ok(BinaryIVMrb { case, kept, dropped, set: identified_set_for(d, kept_set)?, acde })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setcore::Interval1D;

    fn uniform() -> BinaryIVData {
        BinaryIVData::new([0.25; 4], [0.25; 4]).unwrap()
    }

    fn ii1_violating() -> BinaryIVData {
        BinaryIVData::new([0.1, 0.5, 0.2, 0.2], [0.7, 0.1, 0.1, 0.1]).unwrap()
    }

    #[test]
    fn inequality_examples() {
        for c in instrumental_inequalities(&uniform()) {
            assert!(c.holds && (c.slack - 0.5).abs() < 1e-15);
        }
        let holds: Vec<bool> = instrumental_inequalities(&ii1_violating()).iter().map(|c| c.holds).collect();
        assert_eq!(holds, vec![false, true, true, true]);
        let same = BinaryIVData::new([0.4, 0.1, 0.3, 0.2], [0.4, 0.1, 0.3, 0.2]).unwrap();
        assert!(instrumental_inequalities(&same).iter().all(|c| c.holds));
    }

    #[test]
    fn full_model_uniform() {
        let p = identified_set_for(&uniform(), combo(&[1, 2, 3, 4, 5])).unwrap();
        assert!(!p.is_empty().unwrap());
        for axis in 0..4 {
            assert_eq!(p.project(axis).unwrap(), Interval1D::closed(0.25, 0.75));
        }
        assert!(p.contains(&[0.5, 0.5, 0.3, 0.3]));
        assert!(!p.contains(&[0.5, 0.4, 0.3, 0.3]));
    }

    #[test]
    fn full_model_refuted_by_ii1() {
        assert!(identified_set_for(&ii1_violating(), combo(&[1, 2, 3, 4, 5])).unwrap().is_empty().unwrap());
    }

    #[test]
    fn dropping_a3_restores_consistency() {
        let p = identified_set_for(&ii1_violating(), combo(&[1, 2, 4, 5])).unwrap();
        assert!(!p.is_empty().unwrap());
        // Minimum of θ11 - θ10 over the set is 0.2.
        let mut q = p.clone();
        q.push_le(diff(T11, T10), 0.2 - 1e-9);
        assert!(q.is_empty().unwrap());
        let mut q = p;
        q.push_le(diff(T11, T10), 0.2 + 1e-9);
        assert!(!q.is_empty().unwrap());
    }

    #[test]
    fn unsupported_combo() {
        let e = identified_set_for(&uniform(), combo(&[1, 2])).unwrap_err();
        assert!(matches!(e, Error::UnsupportedCombo { .. }));
    }

    #[test]
    fn case_table_rows() {
        let r = mrb_binary_iv(&uniform()).unwrap();
        assert_eq!(r.case, 1);
        assert!(r.dropped.is_empty());
        let r = mrb_binary_iv(&ii1_violating()).unwrap();
        assert_eq!((r.case, r.dropped.clone()), (2, vec!["a3".to_string()]));
        assert_eq!(r.acde[0].direction, AcdeDirection::AtLeast);
        assert!((r.acde[0].bound - 0.2).abs() < 1e-12);
        // Swap the arms: now II2 fails.
        let swapped = BinaryIVData::new(ii1_violating().arm(1), ii1_violating().arm(0)).unwrap();
        let r = mrb_binary_iv(&swapped).unwrap();
        assert_eq!((r.case, r.dropped), (3, vec!["a2".to_string()]));
    }
}

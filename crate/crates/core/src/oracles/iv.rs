//! Linear feasibility over latent potential-outcome atoms for the binary IV model.
//!
//! In each instrument arm `z` the latent atoms are the 32 joint values of
//! `(Y11, Y10, Y01, Y00, D)`, so the program has 64 atom masses. The
//! observed cell `(Y = i, D = j)` in arm `z` collects the atoms with `D = j`
//! and `Y_jz = i`. Independence requires each arm to reproduce the same
//! means `θ_dz = P(Y_dz = 1)`. Each monotonicity assumption removes the
//! atoms that violate it.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::data::BinaryIVData;
use crate::error::{Error, Result};
use crate::lattice::{AssumptionFamily, SubmodelOracle, Subset};
use crate::lp::{LinearProgram, LpNum, LpOutcome};
use crate::setcore::{axis_by_step, GridSet, IdentifiedSet};

/// Bit of `Y_dz` inside an atom, for `θ` coordinates `θ11, θ10, θ01, θ00`.
const Y_BIT: [usize; 4] = [0, 1, 2, 3];
/// Bit of the realized treatment inside an atom.
const D_BIT: usize = 4;
/// Data cells `(i, j)` in storage order `[q11, q01, q10, q00]`.
const CELLS: [(u32, u32); 4] = [(1, 1), (0, 1), (1, 0), (0, 0)];

/// Coordinate of `Y_dz` among `(θ11, θ10, θ01, θ00)`.
fn coord(d: u32, z: usize) -> usize {
    match (d, z) {
        (1, 1) => 0,
        (1, 0) => 1,
        (0, 1) => 2,
        _ => 3,
    }
}

fn bit(atom: usize, b: usize) -> u32 {
    ((atom >> b) & 1) as u32
}

/// Whether an atom survives the monotonicity assumptions in `combo` (bit `i` is `a_{i+1}`).
fn allowed(combo: Subset, atom: usize) -> bool {
    let (y11, y10, y01, y00) = (bit(atom, 0), bit(atom, 1), bit(atom, 2), bit(atom, 3));
    !(combo.contains(1) && y11 < y10
        || combo.contains(2) && y11 > y10
        || combo.contains(3) && y01 < y00
        || combo.contains(4) && y01 > y00)
}

fn require_independence(combo: Subset) -> Result<()> {
    if !combo.contains(0) || !combo.is_subset_of(Subset::full(5)) {
        return Err(Error::Unsupported(format!(
            "the atom program needs a1 and assumptions within a1..a5, got {combo}"
        )));
    }
    Ok(())
}

/// Atom masses followed by the four `θ` coordinates, with the data and independence rows.
fn program<T: LpNum>(arms: &[[T; 4]; 2], combo: Subset) -> LinearProgram<T> {
    let atoms: Vec<(usize, usize)> =
        (0..2).flat_map(|z| (0..32).filter(move |&a| allowed(combo, a)).map(move |a| (z, a))).collect();
    let n = atoms.len() + 4;
    let mut lp = LinearProgram::new(n);
    for z in 0..2 {
        for (slot, &(i, j)) in CELLS.iter().enumerate() {
            let mut row = vec![T::zero(); n];
            for (c, &(az, a)) in atoms.iter().enumerate() {
                if az == z && bit(a, D_BIT) == j && bit(a, Y_BIT[coord(j, z)]) == i {
                    row[c] = T::one();
                }
            }
            lp.add_eq(row, arms[z][slot].clone());
        }
        for t in 0..4 {
            let mut row = vec![T::zero(); n];
            for (c, &(az, a)) in atoms.iter().enumerate() {
                if az == z && bit(a, Y_BIT[t]) == 1 {
                    row[c] = T::one();
                }
            }
            row[atoms.len() + t] = -T::one();
            lp.add_eq(row, T::zero());
        }
    }
    lp
}

fn theta_row<T: LpNum>(n: usize, t: usize) -> Vec<T> {
    let mut row = vec![T::zero(); n];
    row[n - 4 + t] = T::one();
    row
}

fn fix_theta<T: LpNum>(lp: &mut LinearProgram<T>, theta: &[T; 4]) {
    let n = lp.num_vars();
    for (t, v) in theta.iter().enumerate() {
        lp.add_eq(theta_row(n, t), v.clone());
    }
}

fn in_unit_cube<T: LpNum>(theta: &[T; 4]) -> bool {
    theta.iter().all(|v| *v >= T::zero() && *v <= T::one())
}

/// Whether some atom distribution reproduces the data and has means `θ` under `combo` (which must contain `a1`).
pub fn oracle_binaryiv_feasible(d: &BinaryIVData, combo: Subset, theta: [f64; 4]) -> Result<bool> {
    require_independence(combo)?;
    if !in_unit_cube(&theta) {
        return Ok(false);
    }
    let mut lp = program(&[d.arm(0), d.arm(1)], combo);
    fix_theta(&mut lp, &theta);
    Ok(lp.is_feasible())
}

/// Exact rational version of [`oracle_binaryiv_feasible`]; arms are `[q11, q01, q10, q00]`.
pub fn oracle_binaryiv_feasible_exact(
    arms: &[[BigRational; 4]; 2],
    combo: Subset,
    theta: &[BigRational; 4],
) -> Result<bool> {
    require_independence(combo)?;
    if !in_unit_cube(theta) {
        return Ok(false);
    }
    let mut lp = program(arms, combo);
    fix_theta(&mut lp, theta);
    Ok(lp.is_feasible())
}

/// Whether the sub-model `combo` is data-consistent (some `θ` is feasible).
pub fn oracle_binaryiv_consistent(d: &BinaryIVData, combo: Subset) -> Result<bool> {
    require_independence(combo)?;
    Ok(program(&[d.arm(0), d.arm(1)], combo).is_feasible())
}

/// Exact rational version of [`oracle_binaryiv_consistent`].
pub fn oracle_binaryiv_consistent_exact(arms: &[[BigRational; 4]; 2], combo: Subset) -> Result<bool> {
    require_independence(combo)?;
    Ok(program(arms, combo).is_feasible())
}

/// The data converted exactly to rationals.
pub fn rational_arms(d: &BinaryIVData) -> [[BigRational; 4]; 2] {
    [0, 1].map(|z| d.arm(z).map(<BigRational as LpNum>::from_f64))
}

fn range<T: LpNum>(lp: &LinearProgram<T>, t: usize) -> Option<(f64, f64)> {
    let c = theta_row::<T>(lp.num_vars(), t);
    match lp.min_max(&c)? {
        (LpOutcome::Optimal { value: lo, .. }, LpOutcome::Optimal { value: hi, .. }) => {
            Some((lo.to_f64(), hi.to_f64()))
        }
        _ => None,
    }
}

/// Grid points of `[0,1]^4` (spacing `step`) in the feasible `θ` set of `combo`.
///
/// The feasible set is convex, so it is scanned slice by slice: the range
/// of `θ11` is computed, then for every grid value of `θ11` in range the
/// range of `θ10` with `θ11` fixed, and so on down to `θ00`.
pub fn oracle_binaryiv_grid(d: &BinaryIVData, combo: Subset, step: f64) -> Result<GridSet> {
    require_independence(combo)?;
    let axis = axis_by_step(0.0, 1.0, step);
    let axes = vec![axis.clone(); 4];
    let probe = GridSet::full(axes.clone())?;
    let mut mask = vec![false; probe.len()];
    let lp = program(&[d.arm(0), d.arm(1)], combo);
    let mut ix = [0usize; 4];
    scan(&lp, 0, &axis, &mut ix, &probe, &mut mask);
    GridSet::new(axes, mask)
}

fn scan(lp: &LinearProgram<f64>, t: usize, axis: &[f64], ix: &mut [usize; 4], probe: &GridSet, mask: &mut [bool]) {
    let Some((lo, hi)) = range(lp, t) else { return };
    for (g, &v) in axis.iter().enumerate() {
        if v < lo - 1e-9 || v > hi + 1e-9 {
            continue;
        }
        ix[t] = g;
        if t == 3 {
            mask[probe.flat_index(ix)] = true;
        } else {
            let mut next = lp.clone();
            next.add_eq(theta_row(lp.num_vars(), t), v);
            scan(&next, t + 1, axis, ix, probe, mask);
        }
    }
}

/// `max min(LHS_i, LHS_j)` over all data for two instrumental inequalities, in exact arithmetic.
///
/// The inequalities are indexed `0..4` in the order
/// `q11(1)+q01(0)`, `q11(0)+q01(1)`, `q10(1)+q00(0)`, `q10(0)+q00(1)`.
/// A value of at most one shows that the pair can never fail together.
pub fn max_joint_violation(i: usize, j: usize) -> Result<BigRational> {
    if i >= 4 || j >= 4 || i == j {
        return Err(Error::Invalid("need two distinct inequality indices in 0..4".into()));
    }
    // Variables: q(z) for z = 0, 1 in slots [q11, q01, q10, q00], then t.
    let lhs = |k: usize| -> [(usize, usize); 2] {
        match k {
            0 => [(1, 0), (0, 1)],
            1 => [(0, 0), (1, 1)],
            2 => [(1, 2), (0, 3)],
            _ => [(0, 2), (1, 3)],
        }
    };
    let n = 9;
    let mut lp = LinearProgram::<BigRational>::new(n);
    for z in 0..2 {
        let mut row = vec![BigRational::zero(); n];
        for s in 0..4 {
            row[4 * z + s] = BigRational::one();
        }
        lp.add_eq(row, BigRational::one());
    }
    for k in [i, j] {
        let mut row = vec![BigRational::zero(); n];
        row[8] = BigRational::one();
        for (z, s) in lhs(k) {
            row[4 * z + s] = -BigRational::one();
        }
        lp.add_le(row, BigRational::zero());
    }
    let mut c = vec![BigRational::zero(); lp.num_vars()];
    c[8] = -BigRational::one();
    match lp.minimize(&c) {
        LpOutcome::Optimal { value, .. } => Ok(-value),
        _ => Err(Error::Numerical { residual: f64::NAN }),
    }
}

/// Sub-models of `{a2, a3, a4, a5}` with `a1` always maintained, solved by the atom program.
#[derive(Debug, Clone)]
pub struct BinaryIvOracle {
    data: BinaryIVData,
    step: f64,
}

impl BinaryIvOracle {
    fn combo(members: Subset) -> Subset {
        Subset((members.0 << 1) | 1)
    }
}

impl SubmodelOracle for BinaryIvOracle {
    fn identified_set(&self, members: Subset) -> Result<IdentifiedSet> {
        Ok(oracle_binaryiv_grid(&self.data, Self::combo(members), self.step)?.into())
    }

    fn is_consistent(&self, members: Subset) -> Result<bool> {
        oracle_binaryiv_consistent(&self.data, Self::combo(members))
    }
}

/// The family `{a2, a3, a4, a5}` (labels `a2`..`a5`) over `[0,1]^4` with `a1` maintained.
pub fn binaryiv_oracle_family(d: &BinaryIVData, step: f64) -> Result<AssumptionFamily> {
    let ids = ["a2", "a3", "a4", "a5"].map(String::from).to_vec();
    let space = GridSet::full(vec![axis_by_step(0.0, 1.0, step); 4])?;
    AssumptionFamily::custom(ids, space.into(), Arc::new(BinaryIvOracle { data: *d, step }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::ratio;

    fn all() -> Subset {
        Subset::full(5)
    }

    #[test]
    fn uniform_data_symmetric_point() {
        // Independent fair coins for every Y_dz and D reproduce q = 1/4 everywhere.
        let q = [0.25; 4];
        let d = BinaryIVData::new(q, q).unwrap();
        let arms = [
            [ratio(1, 4), ratio(1, 4), ratio(1, 4), ratio(1, 4)],
            [ratio(1, 4), ratio(1, 4), ratio(1, 4), ratio(1, 4)],
        ];
        let half = [ratio(1, 2), ratio(1, 2), ratio(1, 2), ratio(1, 2)];
        assert!(oracle_binaryiv_feasible_exact(&arms, all(), &half).unwrap());
        assert!(oracle_binaryiv_feasible(&d, all(), [0.5; 4]).unwrap());
        assert!(!oracle_binaryiv_feasible(&d, all(), [1.2, 0.5, 0.5, 0.5]).unwrap());
    }

    #[test]
    fn first_inequality_violation_refutes() {
        let d = BinaryIVData::new([0.1, 0.5, 0.2, 0.2], [0.7, 0.1, 0.1, 0.1]).unwrap();
        assert!(!oracle_binaryiv_consistent(&d, all()).unwrap());
        assert!(!oracle_binaryiv_consistent_exact(&rational_arms(&d), all()).unwrap());
        assert!(!oracle_binaryiv_feasible(&d, all(), [0.7, 0.5, 0.3, 0.3]).unwrap());
        let relaxed = Subset::from_indices(&[0, 1, 3, 4]);
        let g = oracle_binaryiv_grid(&d, relaxed, 0.05).unwrap();
        assert!(!g.is_empty());
        assert!(g.marked_points().all(|p| p[0] - p[1] >= 0.2 - 1e-9));
    }

    #[test]
    fn pairs_never_fail_together() {
        for i in 0..4 {
            for j in i + 1..4 {
                assert_eq!(max_joint_violation(i, j).unwrap(), BigRational::one());
            }
        }
    }

    #[test]
    fn independence_required() {
        let d = BinaryIVData::new([0.25; 4], [0.25; 4]).unwrap();
        assert!(oracle_binaryiv_consistent(&d, Subset::from_indices(&[1, 2])).is_err());
    }
}

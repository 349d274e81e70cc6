//! Selectionability checks for random-set models with finite outcome supports.

use crate::error::Result;
use crate::lp::LinearProgram;
use crate::setcore::GridSet;

/// Whether an outcome distribution `p` is the law of a selection of the random set.
///
/// The random set takes the value `focal[s].0` (an outcome mask) with
/// probability `focal[s].1`. A selection exists iff some coupling `π(s, y)`
/// with `y ∈ s` has row sums equal to the focal probabilities and column
/// sums equal to `p`.
pub fn oracle_selectionable(focal: &[(u32, f64)], p: &[f64]) -> bool {
    let pairs: Vec<(usize, usize)> = focal
        .iter()
        .enumerate()
        .flat_map(|(s, (mask, _))| (0..p.len()).filter(move |y| mask & (1 << y) != 0).map(move |y| (s, y)))
        .collect();
    let n = pairs.len();
    let mut lp = LinearProgram::<f64>::new(n);
    for (s, (_, prob)) in focal.iter().enumerate() {
        let row = pairs.iter().map(|&(ps, _)| if ps == s { 1.0 } else { 0.0 }).collect();
        lp.add_eq(row, *prob);
    }
    for (y, py) in p.iter().enumerate() {
        let row = pairs.iter().map(|&(_, py_)| if py_ == y { 1.0 } else { 0.0 }).collect();
        lp.add_eq(row, *py);
    }
    lp.is_feasible()
}

/// Grid of `θ` at which `P(Y | X = x)` is selectionable for every `x`.
///
/// `law(x, θ)` returns the focal sets and probabilities at `(x, θ)`;
/// `p_y_given_x` is indexed `[x][y]`.
pub fn oracle_artstein_sharp(
    law: impl Fn(usize, &[f64]) -> Result<Vec<(u32, f64)>>,
    p_y_given_x: &[Vec<f64>],
    axes: Vec<Vec<f64>>,
) -> Result<GridSet> {
    let probe = GridSet::full(axes.clone())?;
    let mut mask = Vec::with_capacity(probe.len());
    let mut theta = vec![0.0; probe.dim()];
    for idx in 0..probe.len() {
        probe.point_into(idx, &mut theta);
        let mut ok = true;
        for (x, p) in p_y_given_x.iter().enumerate() {
            if !oracle_selectionable(&law(x, &theta)?, p) {
                ok = false;
                break;
            }
        }
        mask.push(ok);
    }
    GridSet::new(axes, mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setcore::axis_by_step;

    #[test]
    fn two_outcome_selection() {
        // {a} with probability θ, {a,b} otherwise; P(b) = 0.3 needs θ ≤ 0.7.
        let law = |_: usize, t: &[f64]| Ok(vec![(0b01, t[0]), (0b11, 1.0 - t[0])]);
        let g = oracle_artstein_sharp(law, &[vec![0.7, 0.3]], vec![axis_by_step(0.0, 1.0, 0.01)]).unwrap();
        let pts: Vec<f64> = g.marked_points().map(|p| p[0]).collect();
        assert!(pts[0].abs() < 1e-12 && (pts[pts.len() - 1] - 0.7).abs() < 1e-9);
    }
}

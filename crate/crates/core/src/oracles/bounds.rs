//! Grid scans and instrument sweeps for conditional mean bounds.

use crate::data::BoundsMoments;
use crate::error::Result;
use crate::setcore::{axis_by_step, axis_linspace, GridSet, TOL};

use super::OracleConfig;

/// Support points with positive probability.
fn support(m: &BoundsMoments) -> Vec<usize> {
    (0..m.len()).filter(|&z| m.weights[z] > 0.0).collect()
}

/// Grid of `θ` with `E[Y̲|Z=z] ≤ θ ≤ E[Ȳ|Z=z]` at every support point of positive mass.
///
/// The grid runs from the smallest lower mean to the largest upper mean.
pub fn oracle_intersection_idset(m: &BoundsMoments, step: f64) -> Result<GridSet> {
    let zs = support(m);
    let lo = zs.iter().map(|&z| m.lower_mean[z]).fold(f64::INFINITY, f64::min);
    let hi = zs.iter().map(|&z| m.upper_mean[z]).fold(f64::NEG_INFINITY, f64::max);
    GridSet::from_fn(vec![axis_by_step(lo, hi, step)], |t| {
        zs.iter().all(|&z| m.lower_mean[z] - TOL <= t[0] && t[0] <= m.upper_mean[z] + TOL)
    })
}

/// One instrument column `h` and the moment bounds it implies.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepColumn {
    /// The two support points mixed by the column.
    pub pair: (usize, usize),
    /// Share of the normalized weight on the first point.
    pub share: f64,
    /// `E[Y̲ h(Z)] / E[h(Z)]`.
    pub lower: f64,
    /// `E[Ȳ h(Z)] / E[h(Z)]`.
    pub upper: f64,
}

/// `E[Y̲ h]/E[h]` and `E[Ȳ h]/E[h]` for a nonnegative column `h`.
fn ratios(m: &BoundsMoments, h: &[f64]) -> (f64, f64) {
    let mass: f64 = (0..m.len()).map(|z| m.weights[z] * h[z]).sum();
    let lo: f64 = (0..m.len()).map(|z| m.weights[z] * h[z] * m.lower_mean[z]).sum();
    let hi: f64 = (0..m.len()).map(|z| m.weights[z] * h[z] * m.upper_mean[z]).sum();
    (lo / mass, hi / mass)
}

/// Columns `h = s·1{Z=i}/P(i) + (1-s)·1{Z=j}/P(j)` for every pair `i < j`
/// of support points and `s = 0, 1/R, ..., 1`.
pub fn sweep_columns(m: &BoundsMoments, resolution: usize) -> Vec<SweepColumn> {
    let zs = support(m);
    let mut out = Vec::new();
    let mut h = vec![0.0; m.len()];
    let pairs: Vec<(usize, usize)> = if zs.len() == 1 {
        vec![(zs[0], zs[0])]
    } else {
        zs.iter().enumerate().flat_map(|(a, &i)| zs[a + 1..].iter().map(move |&j| (i, j))).collect()
    };
    for (i, j) in pairs {
        for r in 0..=resolution {
            let s = r as f64 / resolution as f64;
            h.iter_mut().for_each(|v| *v = 0.0);
            h[i] += s / m.weights[i];
            h[j] += (1.0 - s) / m.weights[j];
            let (lower, upper) = ratios(m, &h);
            out.push(SweepColumn { pair: (i, j), share: s, lower, upper });
        }
    }
    out
}

/// Values point-identified by two-column instruments from the sweep.
///
/// A pair of columns `(a, b)` identifies the interval
/// `[max(L_a, L_b), min(U_a, U_b)]`; it is recorded when that interval is
/// nonempty and no wider than `tol`. Returned values are midpoints, sorted.
pub fn sweep_singletons(m: &BoundsMoments, resolution: usize, tol: f64) -> Vec<f64> {
    let mut cols = sweep_columns(m, resolution);
    cols.sort_by(|a, b| a.lower.total_cmp(&b.lower));
    let lowers: Vec<f64> = cols.iter().map(|c| c.lower).collect();
    let mut found = Vec::new();
    for b in &cols {
        let start = lowers.partition_point(|&l| l < b.upper - tol);
        let end = lowers.partition_point(|&l| l <= b.upper + tol);
        for a in &cols[start..end] {
            let lo = a.lower.max(b.lower);
            let hi = a.upper.min(b.upper);
            if hi >= lo - 1e-15 && hi - lo <= tol {
                found.push(0.5 * (lo + hi));
            }
        }
    }
    found.sort_by(f64::total_cmp);
    found.dedup();
    found
}

/// Union of sweep point-identified values on a grid of `R + 1` points
/// spanning the smallest lower mean to the largest upper mean.
///
/// Pairs are accepted with tolerance one grid step and each value marks its
/// nearest grid point.
pub fn oracle_mrb_by_instrument_sweep(m: &BoundsMoments, cfg: &OracleConfig) -> Result<GridSet> {
    cfg.validate()?;
    let r = cfg.instrument_sweep_resolution;
    let zs = support(m);
    let lo = zs.iter().map(|&z| m.lower_mean[z]).fold(f64::INFINITY, f64::min);
    let hi = zs.iter().map(|&z| m.upper_mean[z]).fold(f64::NEG_INFINITY, f64::max);
    if hi - lo <= TOL {
        return GridSet::full(vec![vec![lo]]);
    }
    let axis = axis_linspace(lo, hi, r + 1);
    let step = (hi - lo) / r as f64;
    let mut mask = vec![false; r + 1];
    for v in sweep_singletons(m, r, step) {
        let i = (((v - lo) / step).round().max(0.0) as usize).min(r);
        mask[i] = true;
    }
    GridSet::new(vec![axis], mask)
}

/// `(P(E[Y̲|Z] ≤ γ̄), P(E[Ȳ|Z] ≥ γ̲))`, with `γ̄ = min E[Ȳ|Z]` and `γ̲ = max E[Y̲|Z]` over the support.
pub fn oracle_endpoint_masses(m: &BoundsMoments) -> (f64, f64) {
    let zs = support(m);
    let g_up = zs.iter().map(|&z| m.upper_mean[z]).fold(f64::INFINITY, f64::min);
    let g_lo = zs.iter().map(|&z| m.lower_mean[z]).fold(f64::NEG_INFINITY, f64::max);
    let lower_mass = zs.iter().filter(|&&z| m.lower_mean[z] <= g_up + TOL).map(|&z| m.weights[z]).sum();
    let upper_mass = zs.iter().filter(|&&z| m.upper_mean[z] >= g_lo - TOL).map(|&z| m.weights[z]).sum();
    (lower_mass, upper_mass)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn range(g: &GridSet) -> (f64, f64) {
        let pts: Vec<f64> = g.marked_points().map(|p| p[0]).collect();
        (pts[0], pts[pts.len() - 1])
    }

    #[test]
    fn literal_grid_scan() {
        let m = BoundsMoments::equal_weights(vec![0.2, 0.4], vec![0.6, 0.8]).unwrap();
        let (lo, hi) = range(&oracle_intersection_idset(&m, 0.01).unwrap());
        assert!((lo - 0.4).abs() < 1e-9 && (hi - 0.6).abs() < 1e-9);
        let refuted = BoundsMoments::equal_weights(vec![0.6, 0.0], vec![1.0, 0.4]).unwrap();
        assert!(oracle_intersection_idset(&refuted, 0.01).unwrap().is_empty());
    }

    #[test]
    fn sweep_recovers_crossed_bounds() {
        let m = BoundsMoments::equal_weights(vec![0.6, 0.0], vec![1.0, 0.4]).unwrap();
        let g = oracle_mrb_by_instrument_sweep(&m, &OracleConfig::default()).unwrap();
        let (lo, hi) = range(&g);
        let step = 1.0 / 200.0;
        assert!((lo - 0.4).abs() <= 2.0 * step && (hi - 0.6).abs() <= 2.0 * step);
        let exact = sweep_singletons(&m, 200, 1e-12);
        assert!(exact.iter().all(|v| (0.4 - 1e-9..=0.6 + 1e-9).contains(v)));
        assert_eq!(oracle_endpoint_masses(&m), (0.5, 0.5));
    }
}

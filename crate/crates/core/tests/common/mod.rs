//! Random instances shared by the property tests.

#![allow(dead_code)]

use mrb_core::data::{AMIVMoments, BinaryIVData, BoundsMoments};
use mrb_core::intersect::sharp_bounds;
use mrb_core::lattice::AssumptionFamily;
use mrb_core::setcore::Interval1D;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A point of the probability simplex with `n` coordinates, all positive.
pub fn simplex(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| -(1.0 - r.random::<f64>()).ln() + 1e-3).collect();
    let s: f64 = v.iter().sum();
    v.iter().map(|x| x / s).collect()
}

/// Discrete-instrument moments with `k` support points and bounds in `[0, 1]`.
pub fn bounds_moments(r: &mut ChaCha8Rng, k: usize) -> BoundsMoments {
    let lower: Vec<f64> = (0..k).map(|_| r.random::<f64>()).collect();
    let upper: Vec<f64> = lower.iter().map(|l| (l + 0.4 * r.random::<f64>()).min(1.0)).collect();
    BoundsMoments::unlabeled(simplex(r, k), lower, upper).unwrap()
}

/// Moments drawn until the sharp bounds cross.
pub fn refuted_moments(r: &mut ChaCha8Rng) -> BoundsMoments {
    loop {
        let k = r.random_range(2..=6);
        let m = bounds_moments(r, k);
        if sharp_bounds(&m).refuted {
            return m;
        }
    }
}

/// Moments drawn until the sharp bounds are ordered.
pub fn consistent_moments(r: &mut ChaCha8Rng) -> BoundsMoments {
    loop {
        let k = r.random_range(1..=6);
        let lower: Vec<f64> = (0..k).map(|_| 0.4 * r.random::<f64>()).collect();
        let upper: Vec<f64> = (0..k).map(|_| 0.45 + 0.55 * r.random::<f64>()).collect();
        let m = BoundsMoments::unlabeled(simplex(r, k), lower, upper).unwrap();
        if !sharp_bounds(&m).refuted {
            return m;
        }
    }
}

/// A nonnegative instrument column with at least one positive entry.
pub fn instrument_column(r: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    loop {
        let c: Vec<f64> = (0..k).map(|_| if r.random::<f64>() < 0.3 { 0.0 } else { 3.0 * r.random::<f64>() }).collect();
        if c.iter().any(|v| *v > 0.0) {
            return c;
        }
    }
}

pub fn binary_iv(r: &mut ChaCha8Rng) -> BinaryIVData {
    let a = simplex(r, 4);
    let b = simplex(r, 4);
    BinaryIVData::new([a[0], a[1], a[2], a[3]], [b[0], b[1], b[2], b[3]]).unwrap()
}

/// Monotone-IV moments with `k` instrument values and outcomes in `[0, 1]`.
pub fn amiv_moments(r: &mut ChaCha8Rng, k: usize) -> AMIVMoments {
    let mut lo = [Vec::new(), Vec::new()];
    let mut hi = [Vec::new(), Vec::new()];
    for d in 0..2 {
        for _ in 0..k {
            let a = r.random::<f64>();
            let b = r.random::<f64>();
            lo[d].push(a.min(b));
            hi[d].push(a.max(b));
        }
    }
    AMIVMoments::new(simplex(r, k), lo, hi, [0.0, 0.0], [1.0, 1.0]).unwrap()
}

/// Closed interval atoms on a half-integer grid in `[0, 10]`; about a fifth are points.
pub fn interval_atoms(r: &mut ChaCha8Rng, n: usize) -> Vec<Interval1D> {
    (0..n)
        .map(|_| {
            let a = f64::from(r.random_range(0..=16u32)) * 0.5;
            let len = if r.random::<f64>() < 0.2 { 0.0 } else { f64::from(r.random_range(1..=8u32)) * 0.5 };
            Interval1D::closed(a, a + len)
        })
        .collect()
}

pub fn interval_family(r: &mut ChaCha8Rng, n: usize) -> AssumptionFamily {
    AssumptionFamily::of_intervals(interval_atoms(r, n))
}

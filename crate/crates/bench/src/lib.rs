//! Fixed inputs shared by the benchmarks.

use std::sync::Arc;

use mrb_core::artstein::{FiniteCapacityModel, FocalSet, RandomSetCapacity};
use mrb_core::data::{AMIVMoments, BinaryIVData, BoundsMoments};
use mrb_core::lattice::AssumptionFamily;
use mrb_core::setcore::{axis_by_step, Interval1D};

/// Six-point instrument with crossed bounds.
pub fn refuted_moments() -> BoundsMoments {
    BoundsMoments::unlabeled(
        vec![0.1, 0.2, 0.15, 0.25, 0.2, 0.1],
        vec![0.1, 0.6, 0.2, 0.35, 0.5, 0.3],
        vec![0.4, 0.9, 0.5, 0.7, 0.8, 0.45],
    )
    .expect("valid moments")
}

/// Cell frequencies violating the first instrumental inequality.
pub fn refuted_binary_iv() -> BinaryIVData {
    BinaryIVData::new([0.1, 0.5, 0.2, 0.2], [0.7, 0.1, 0.1, 0.1]).expect("valid frequencies")
}

/// Three instrument values, bounds on `[0, 1]`.
pub fn amiv_moments() -> AMIVMoments {
    AMIVMoments::new(
        vec![0.3, 0.4, 0.3],
        [vec![0.2, 0.3, 0.25], vec![0.4, 0.35, 0.6]],
        [vec![0.7, 0.8, 0.75], vec![0.9, 0.55, 0.95]],
        [0.0, 0.0],
        [1.0, 1.0],
    )
    .expect("valid moments")
}

/// `n` interval atoms on a sliding window, refuted for `n ≥ 3`.
pub fn interval_family(n: usize) -> AssumptionFamily {
    AssumptionFamily::of_intervals(
        (0..n).map(|i| Interval1D::closed(i as f64 * 0.75, i as f64 * 0.75 + 1.0 + (i % 3) as f64 * 0.5)).collect(),
    )
}

/// Three outcomes, two covariate values, one parameter on a grid of 51 points.
pub fn capacity_model() -> FiniteCapacityModel {
    let law = |a: u32, b: u32| {
        vec![
            FocalSet { set: a, intercept: 0.0, slope: vec![1.0] },
            FocalSet { set: b, intercept: 1.0, slope: vec![-1.0] },
        ]
    };
    FiniteCapacityModel::new(
        vec!["a".into(), "b".into(), "c".into()],
        vec!["x1".into(), "x2".into()],
        vec![vec![0.3, 0.3, 0.4], vec![0.5, 0.2, 0.3]],
        Arc::new(RandomSetCapacity::new(3, vec![law(0b011, 0b110), law(0b001, 0b111)]).expect("valid law")),
        vec![axis_by_step(0.0, 1.0, 0.02)],
    )
    .expect("valid model")
}

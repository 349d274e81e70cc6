//! Closed-form binary IV sets against their defining bounds.

mod common;

use mrb_core::binaryiv::{combo, identified_set_for, instrumental_inequalities, mrb_binary_iv, T00, T01, T10, T11};
use mrb_core::data::BinaryIVData;
use proptest::prelude::*;

fn max_z(d: &BinaryIVData, i: usize, j: usize) -> f64 {
    d.q(i, j, 0).max(d.q(i, j, 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn full_model_projections_are_the_excluded_bounds(seed: u64) {
        let mut r = common::rng(seed);
        let d = common::binary_iv(&mut r);
        let full = identified_set_for(&d, combo(&[1, 2, 3, 4, 5])).unwrap();
        prop_assume!(!full.is_empty().unwrap());
        let treated = (max_z(&d, 1, 1), 1.0 - max_z(&d, 0, 1));
        let untreated = (max_z(&d, 1, 0), 1.0 - max_z(&d, 0, 0));
        for (axis, (lo, hi)) in [(T11, treated), (T10, treated), (T01, untreated), (T00, untreated)] {
            let p = full.project(axis).unwrap();
            prop_assert!((p.lo - lo).abs() < 1e-12 && (p.hi - hi).abs() < 1e-12, "axis {}: {:?} vs [{}, {}]", axis, p, lo, hi);
            prop_assert!(!p.lo_open && !p.hi_open);
        }
    }

    #[test]
    fn nonempty_full_model_passes_every_inequality(seed: u64) {
        let mut r = common::rng(seed);
        let d = common::binary_iv(&mut r);
        let full = identified_set_for(&d, combo(&[1, 2, 3, 4, 5])).unwrap();
        let all_hold = instrumental_inequalities(&d).iter().all(|c| c.holds);
        prop_assert_eq!(!full.is_empty().unwrap(), all_hold);
    }

    #[test]
    fn selected_row_is_nonempty(seed: u64) {
        let mut r = common::rng(seed);
        let d = common::binary_iv(&mut r);
        let res = mrb_binary_iv(&d).unwrap();
        prop_assert!((1..=5).contains(&res.case));
        prop_assert!(!res.set.is_empty().unwrap());
        prop_assert_eq!(res.kept.len() + res.dropped.len(), 5);
    }
}

//! Every oracle returns identical results on repeated calls.

mod common;

use mrb_core::binaryiv::supported_combos;
use mrb_core::oracles::{
    oracle_amiv_bounds, oracle_binaryiv_grid, oracle_intersection_idset, oracle_mrb_by_instrument_sweep, OracleConfig,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn oracles_are_deterministic(seed: u64) {
        let mut r = common::rng(seed);
        let cfg = OracleConfig::default();
        let m = common::refuted_moments(&mut r);
        prop_assert_eq!(oracle_mrb_by_instrument_sweep(&m, &cfg).unwrap(), oracle_mrb_by_instrument_sweep(&m, &cfg).unwrap());
        prop_assert_eq!(oracle_intersection_idset(&m, 0.01).unwrap(), oracle_intersection_idset(&m, 0.01).unwrap());
        let d = common::binary_iv(&mut r);
        let c = supported_combos()[1];
        prop_assert_eq!(oracle_binaryiv_grid(&d, c, 0.1).unwrap(), oracle_binaryiv_grid(&d, c, 0.1).unwrap());
        let a = common::amiv_moments(&mut r, 2);
        prop_assert_eq!(oracle_amiv_bounds(&a, None, 0.05).unwrap(), oracle_amiv_bounds(&a, None, 0.05).unwrap());
    }
}

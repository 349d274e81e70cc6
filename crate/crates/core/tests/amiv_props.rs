//! Cutoff membership, uniqueness and nesting for adaptive monotone IV.

mod common;

use mrb_core::amiv::{amiv_family, amiv_mrb, amiv_star_membership, amiv_star_membership_joint, gamma, CutoffMode};
use mrb_core::lattice::find_minimal_relaxations;
use mrb_core::setcore::{IdentifiedSet, Interval1D};
use proptest::prelude::*;

fn inside(a: &Interval1D, b: &Interval1D) -> bool {
    a.lo >= b.lo - 1e-12 && a.hi <= b.hi + 1e-12
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn membership_is_monotone_in_the_cutoff(seed: u64, k in 1usize..=5) {
        let mut r = common::rng(seed);
        let m = common::amiv_moments(&mut r, k);
        for z in 1..k {
            for d in 0..2 {
                prop_assert!(!amiv_star_membership(&m, z, d) || amiv_star_membership(&m, z + 1, d));
            }
            prop_assert!(!amiv_star_membership_joint(&m, z) || amiv_star_membership_joint(&m, z + 1));
        }
    }

    #[test]
    fn gamma_widens_with_the_cutoff(seed: u64, k in 1usize..=5) {
        let mut r = common::rng(seed);
        let m = common::amiv_moments(&mut r, k);
        for d in 0..2 {
            for z in 1..k {
                let a = gamma(&m, d, z);
                let b = gamma(&m, d, z + 1);
                prop_assert!(b.lo <= a.lo + 1e-12 && b.hi >= a.hi - 1e-12, "d = {}, z = {}: {:?} then {:?}", d, z, a, b);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn unique_relaxation_matches_the_star_members(seed: u64, k in 1usize..=5) {
        let mut r = common::rng(seed);
        let m = common::amiv_moments(&mut r, k);
        let res = amiv_mrb(&m, CutoffMode::Joint);
        let fam = amiv_family(&m).unwrap();
        let rep = find_minimal_relaxations(&fam).unwrap();
        prop_assert_eq!(rep.minimal_relaxations.len(), 1);
        let mut expected: Vec<String> = (1..=k).filter(|z| res.star_members[z - 1]).map(|z| format!("a{z}")).collect();
        expected.push("adag".into());
        prop_assert_eq!(&rep.relaxation_labels()[0], &expected);
        let set = rep.relaxation_sets[0].clone();
        prop_assert_eq!(set, IdentifiedSet::from(res.mrb()));
    }

    #[test]
    fn mrb_is_the_mean_independence_box_when_that_model_holds(seed: u64, k in 1usize..=5) {
        let mut r = common::rng(seed);
        let m = common::amiv_moments(&mut r, k);
        for mode in [CutoffMode::Joint, CutoffMode::PerOutcome] {
            let res = amiv_mrb(&m, mode);
            for d in 0..2 {
                // A shared cutoff also answers to the other treatment.
                if mode == CutoffMode::PerOutcome && !res.mi[d].is_empty() {
                    prop_assert_eq!(res.gamma[d], res.mi[d]);
                    prop_assert!(!res.miv[d].is_empty() && inside(&res.gamma[d], &res.miv[d]));
                }
            }
            if res.mi.iter().all(|iv| !iv.is_empty()) {
                prop_assert_eq!(res.mrb(), res.mi_box());
                prop_assert!(res.mi_box().is_subset_of(&res.miv_box()));
            }
        }
    }
}

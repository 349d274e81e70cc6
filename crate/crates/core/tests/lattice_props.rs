//! Properties of the relaxation search on random interval families.

mod common;

use mrb_core::lattice::{
    falsification_adaptive_grid, find_discordance, find_minimal_relaxations, is_nonconflicting, AssumptionFamily,
    SlackFamily, Subset,
};
use mrb_core::setcore::{cell_mask, intersect, is_subset, IdentifiedSet, Interval1D, SetUnion};
use proptest::prelude::*;
use rand::Rng;

/// Literal check: `b` is consistent and adding any further atom makes it inconsistent.
fn is_minimal_relaxation(fam: &AssumptionFamily, b: Subset) -> bool {
    fam.is_consistent(b).unwrap()
        && (0..fam.len()).filter(|&i| !b.contains(i)).all(|i| !fam.is_consistent(b.with(i)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn identified_sets_shrink_as_assumptions_are_added(seed: u64, n in 1usize..=8) {
        let mut r = common::rng(seed);
        let fam = common::interval_family(&mut r, n);
        for _ in 0..20 {
            let small = Subset(r.random_range(0..1u32 << n));
            let big = small.union(Subset(r.random_range(0..1u32 << n)));
            let s_small = fam.identified_set(small).unwrap();
            let s_big = fam.identified_set(big).unwrap();
            prop_assert!(is_subset(&s_big, &s_small).unwrap(), "{:?} ⊄ {:?}", s_big, s_small);
        }
    }

    #[test]
    fn reported_relaxations_are_exactly_the_minimal_ones(seed: u64, n in 1usize..=8) {
        let mut r = common::rng(seed);
        let fam = common::interval_family(&mut r, n);
        let rep = find_minimal_relaxations(&fam).unwrap();
        let expected: Vec<Subset> = (0..1u32 << n).map(Subset).filter(|&b| is_minimal_relaxation(&fam, b)).collect();
        let mut reported = rep.minimal_relaxations.clone();
        reported.sort_by_key(|s| s.0);
        prop_assert_eq!(&reported, &expected);
        prop_assert_eq!(&rep.minimal_relaxations, &expected, "relaxations are listed in ascending bitmask order");
        for (b, set) in rep.minimal_relaxations.iter().zip(&rep.relaxation_sets) {
            prop_assert_eq!(set, &fam.identified_set(*b).unwrap());
        }
    }

    #[test]
    fn consistent_family_is_its_own_relaxation(seed: u64, n in 1usize..=8) {
        let mut r = common::rng(seed);
        // Atoms around a shared point so that the full family is often consistent.
        let c = f64::from(r.random_range(2..=8u32));
        let atoms: Vec<Interval1D> = (0..n)
            .map(|_| Interval1D::closed(c - f64::from(r.random_range(0..=4u32)) * 0.5, c + f64::from(r.random_range(0..=4u32)) * 0.5))
            .collect();
        let fam = AssumptionFamily::of_intervals(atoms);
        let full = fam.identified_set(fam.full()).unwrap();
        prop_assert!(!full.is_empty().unwrap());
        let rep = find_minimal_relaxations(&fam).unwrap();
        prop_assert!(!rep.full_model_refuted);
        prop_assert_eq!(&rep.minimal_relaxations, &vec![fam.full()]);
        let mrb = rep.mrb_set();
        prop_assert!(is_subset(&mrb, &full).unwrap() && is_subset(&full, &mrb).unwrap());
    }

    #[test]
    fn mrb_is_nonconflicting(seed: u64, n in 1usize..=8) {
        let mut r = common::rng(seed);
        let fam = common::interval_family(&mut r, n);
        prop_assume!((0..n).any(|i| fam.is_consistent(Subset::from_indices(&[i])).unwrap()));
        let rep = find_minimal_relaxations(&fam).unwrap();
        prop_assert!(is_nonconflicting(&fam, &rep.mrb_set()).unwrap());
    }

    #[test]
    fn accepted_statements_contain_the_smallest_element(seed: u64, n in 1usize..=6) {
        let mut r = common::rng(seed);
        let fam = common::interval_family(&mut r, n);
        let rep = find_minimal_relaxations(&fam).unwrap();
        prop_assume!(rep.flags.unique_minimal || rep.flags.all_singleton);
        let mrb = rep.mrb_set();
        for _ in 0..16 {
            let parts: Vec<IdentifiedSet> = fam.atom_sets().iter().filter(|_| r.random::<bool>()).cloned().collect();
            if parts.is_empty() {
                continue;
            }
            let s: IdentifiedSet = SetUnion::new(1, parts).unwrap().into();
            if is_nonconflicting(&fam, &s).unwrap() {
                prop_assert!(is_subset(&mrb, &s).unwrap(), "MRB {:?} not inside accepted {:?}", mrb, s);
            }
        }
    }

    #[test]
    fn discordance_certificate_iff_refuted(seed: u64, n in 1usize..=8) {
        let mut r = common::rng(seed);
        let fam = common::interval_family(&mut r, n);
        let refuted = fam.identified_set(fam.full()).unwrap().is_empty().unwrap();
        let cert = find_discordance(&fam).unwrap();
        prop_assert_eq!(cert.is_some(), refuted);
        if let Some(c) = cert {
            prop_assert!(!c.set_a.is_empty().unwrap() && !c.set_b.is_empty().unwrap());
            prop_assert!(intersect(&c.set_a, &c.set_b).unwrap().is_empty().unwrap());
            prop_assert!(fam.is_consistent(c.submodel_a).unwrap() && fam.is_consistent(c.submodel_b).unwrap());
        }
    }

    #[test]
    fn point_atoms_keep_the_mrb_inside_the_fas(seed: u64, n in 1usize..=8) {
        let mut r = common::rng(seed);
        let atoms: Vec<Interval1D> = (0..n).map(|_| Interval1D::point(f64::from(r.random_range(0..=10u32)) * 0.5)).collect();
        let fam = AssumptionFamily::of_intervals(atoms);
        let rep = find_minimal_relaxations(&fam).unwrap();
        prop_assert!(rep.flags.all_singleton);
        let mut sf = SlackFamily::both_sides(fam);
        sf.grid_step = 0.25;
        let fas = falsification_adaptive_grid(&sf).unwrap();
        let mrb = cell_mask(&rep.mrb_set(), fas.axes()).unwrap();
        prop_assert!(mrb.mask().iter().zip(fas.mask()).all(|(m, f)| !m || *f), "MRB {:?} outside FAS {:?}", rep.mrb, fas);
    }
}

#[test]
fn counterexample_families_have_no_certificate() {
    let nested = AssumptionFamily::of_intervals(vec![
        Interval1D::closed(1.0, 2.0),
        Interval1D::closed(0.0, 3.0),
        Interval1D::empty(),
    ]);
    assert!(find_minimal_relaxations(&nested).unwrap().full_model_refuted);
    assert!(find_discordance(&nested).unwrap().is_none());
}

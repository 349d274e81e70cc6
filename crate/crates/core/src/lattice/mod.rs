//! The assumption-lattice engine.
//!
//! Given a finite family of assumptions and a rule producing the identified
//! set of any sub-model, this module detects refutation, finds discordant
//! pairs of sub-models, enumerates every minimal data-consistent relaxation,
//! forms the misspecification-robust bound (their union), checks whether a
//! statement is nonconflicting, evaluates the smallest-element conditions
//! and computes the falsification adaptive set of interval families.

pub mod discord;
pub mod family;
pub mod fas;
pub mod search;

pub use discord::{find_discordance, is_nonconflicting, DiscordanceCertificate};
pub use family::{AssumptionFamily, Composition, SubmodelOracle, Subset, MAX_FAMILY};
pub use fas::{falsification_adaptive_grid, falsification_adaptive_set, SlackDir, SlackFamily};
pub use search::{
    check_smallest_conditions, consistency_table, find_minimal_relaxations, ConditionFlags, ConsistencyTable,
    RelaxationReport, RelaxationReportJson,
};

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::error::Result;
    use crate::setcore::{IdentifiedSet, Interval1D, SetUnion};

    fn three_intervals() -> AssumptionFamily {
        AssumptionFamily::of_intervals(vec![
            Interval1D::closed(1.0, 2.0),
            Interval1D::closed(3.0, 4.0),
            Interval1D::closed(0.0, 5.0),
        ])
    }

    fn iv(lo: f64, hi: f64) -> IdentifiedSet {
        Interval1D::closed(lo, hi).into()
    }

    #[test]
    fn empty_subset_gives_whole_space() {
        let fam = three_intervals();
        assert_eq!(fam.identified_set(Subset::EMPTY).unwrap(), IdentifiedSet::whole(1));
    }

    #[test]
    fn three_intervals_sub_models() {
        let fam = three_intervals();
        assert!(fam.identified_set(fam.subset(&["a1", "a2"]).unwrap()).unwrap().is_empty().unwrap());
        assert_eq!(fam.identified_set(fam.subset(&["a1", "a3"]).unwrap()).unwrap(), iv(1.0, 2.0));
        assert!(matches!(fam.subset(&["a9"]), Err(crate::Error::Key(_))));
    }

    #[test]
    fn three_intervals_relaxations() {
        let r = find_minimal_relaxations(&three_intervals()).unwrap();
        assert_eq!(r.relaxation_labels(), vec![vec!["a1", "a3"], vec!["a2", "a3"]]);
        assert_eq!(r.mrb.parts, vec![iv(1.0, 2.0), iv(3.0, 4.0)]);
        assert!(r.full_model_refuted);
        assert_eq!(r.flags, ConditionFlags { unique_minimal: false, all_singleton: false, no_nested_ok: true });
    }

    #[test]
    fn two_interval_relaxations() {
        let fam = AssumptionFamily::of_intervals(vec![Interval1D::closed(0.0, 1.0), Interval1D::closed(2.0, 3.0)]);
        let r = find_minimal_relaxations(&fam).unwrap();
        assert_eq!(r.relaxation_labels(), vec![vec!["a1"], vec!["a2"]]);
    }

    #[test]
    fn consistent_family_is_its_own_relaxation() {
        let fam = AssumptionFamily::of_intervals(vec![Interval1D::closed(0.0, 2.0), Interval1D::closed(1.0, 3.0)]);
        let r = find_minimal_relaxations(&fam).unwrap();
        assert_eq!(r.relaxation_labels(), vec![vec!["a1", "a2"]]);
        assert_eq!(r.mrb.parts, vec![iv(1.0, 2.0)]);
        assert!(r.flags.unique_minimal && r.flags.no_nested_ok);
        assert!(find_discordance(&fam).unwrap().is_none());
    }

    #[test]
    fn three_intervals_certificate() {
        let c = find_discordance(&three_intervals()).unwrap().unwrap();
        assert_eq!((c.submodel_a, c.submodel_b), (Subset::from_indices(&[0]), Subset::from_indices(&[1])));
        assert_eq!((c.set_a, c.set_b), (iv(1.0, 2.0), iv(3.0, 4.0)));
    }

    #[test]
    fn nested_atoms_with_empty_third_have_no_certificate() {
        let fam = AssumptionFamily::of_intervals(vec![
            Interval1D::closed(1.0, 2.0),
            Interval1D::closed(0.0, 3.0),
            Interval1D::empty(),
        ]);
        assert!(!fam.is_consistent(fam.full()).unwrap());
        assert!(find_discordance(&fam).unwrap().is_none());
    }

    #[test]
    fn nonconflicting_statements() {
        let fam = three_intervals();
        let mrb: IdentifiedSet = SetUnion::new(1, vec![iv(1.0, 2.0), iv(3.0, 4.0)]).unwrap().into();
        assert!(is_nonconflicting(&fam, &mrb).unwrap());
        assert!(!is_nonconflicting(&fam, &iv(1.0, 2.0)).unwrap());
        assert!(is_nonconflicting(&fam, &IdentifiedSet::whole(1)).unwrap());
    }

    struct Nested;
    impl SubmodelOracle for Nested {
        fn identified_set(&self, members: Subset) -> Result<IdentifiedSet> {
            Ok(match members.0 {
                0b01 => iv(1.0, 2.0),
                0b10 => iv(0.0, 3.0),
                _ => IdentifiedSet::empty(1),
            })
        }
    }

    #[test]
    fn nested_sets_declared_jointly_inconsistent() {
        let fam = AssumptionFamily::custom(vec!["a1".into(), "a2".into()], IdentifiedSet::whole(1), Arc::new(Nested))
            .unwrap();
        let flags = check_smallest_conditions(&fam).unwrap();
        assert!(!flags.no_nested_ok);
        assert!(matches!(is_nonconflicting(&fam, &IdentifiedSet::whole(1)), Err(crate::Error::Unsupported(_))));
    }

    #[test]
    fn two_interval_fas() {
        let fam = AssumptionFamily::of_intervals(vec![Interval1D::closed(0.0, 1.0), Interval1D::closed(2.0, 3.0)]);
        let sf = SlackFamily::both_sides(fam);
        assert_eq!(falsification_adaptive_set(&sf).unwrap(), iv(1.0, 2.0));
        let grid = falsification_adaptive_grid(&sf).unwrap();
        let pts: Vec<f64> = grid.marked_points().map(|p| p[0]).collect();
        assert!((pts[0] - 1.0).abs() < 1e-9 && (pts[pts.len() - 1] - 2.0).abs() < 1e-9);
        assert_eq!(pts.len(), 1001);
    }

    #[test]
    fn consistent_fas_is_identified_set() {
        let fam = AssumptionFamily::of_intervals(vec![Interval1D::closed(0.0, 2.0), Interval1D::closed(1.0, 3.0)]);
        assert_eq!(falsification_adaptive_set(&SlackFamily::both_sides(fam)).unwrap(), iv(1.0, 2.0));
    }

    #[test]
    fn one_sided_slack_on_grid() {
        // Only the upper end of [0,1] and the lower end of [2,3] move: every θ in [1,2] is still frontier.
        let fam = AssumptionFamily::of_intervals(vec![Interval1D::closed(0.0, 1.0), Interval1D::closed(2.0, 3.0)]);
        let sf = SlackFamily { base: fam, slack_dirs: vec![SlackDir::Upper, SlackDir::Lower], grid_step: 1e-2 };
        let g = match falsification_adaptive_set(&sf).unwrap() {
            IdentifiedSet::Grid(g) => g,
            other => panic!("{other:?}"),
        };
        let pts: Vec<f64> = g.marked_points().map(|p| p[0]).collect();
        assert!((pts[0] - 1.0).abs() < 1e-9 && (pts[pts.len() - 1] - 2.0).abs() < 1e-9);
    }
}

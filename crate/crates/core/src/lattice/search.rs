//! Exhaustive search of the subset lattice.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::family::{AssumptionFamily, Composition, Subset};
use crate::error::{Error, Result};
use crate::setcore::{intersect, is_subset, IdentifiedSet, SetUnion};

/// Largest number of consistent sub-models compared pairwise by the no-nesting check.
const PAIR_BUDGET: usize = 1 << 10;

/// Data-consistency of every subset of a family, one bit per bitmask.
#[derive(Debug, Clone)]
pub struct ConsistencyTable {
    n: usize,
    bits: Vec<u64>,
}

impl ConsistencyTable {
    /// Whether subset `s` is data-consistent.
    pub fn get(&self, s: Subset) -> bool {
        let i = s.0 as usize;
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, s: Subset) {
        let i = s.0 as usize;
        self.bits[i / 64] |= 1 << (i % 64);
    }

    /// Consistent subsets in ascending bitmask order.
    pub fn consistent(&self) -> impl Iterator<Item = Subset> + '_ {
        (0..(1u64 << self.n)).map(|m| Subset(m as u32)).filter(|&s| self.get(s))
    }

    /// Subsets satisfying the literal minimal-relaxation check, ascending.
    pub fn maximal(&self) -> Vec<Subset> {
        self.consistent().filter(|&s| (0..self.n).all(|a| s.contains(a) || !self.get(s.with(a)))).collect()
    }
}

/// Evaluates consistency of all `2^n` subsets.
///
/// Under the intersection rule the lattice is walked depth first, adding
/// assumptions in increasing index order and carrying the running
/// intersection; an inconsistent subset prunes every extension of it.
/// Oracle-backed families are queried subset by subset.
pub fn consistency_table(fam: &AssumptionFamily) -> Result<ConsistencyTable> {
    let n = fam.len();
    let size = 1usize << n;
    let mut table = ConsistencyTable { n, bits: vec![0; size.div_ceil(64)] };
    match fam.composition() {
        Composition::IntersectionRule => {
            if fam.space().is_empty()? {
                return Ok(table);
            }
            let mut stack: Vec<(Subset, usize, IdentifiedSet)> = vec![(Subset::EMPTY, 0, fam.space().clone())];
            while let Some((s, next, set)) = stack.pop() {
                table.set(s);
                for j in (next..n).rev() {
                    let child = intersect(&set, &fam.atom_sets()[j])?;
                    if !child.is_empty()? {
                        stack.push((s.with(j), j + 1, child));
                    }
                }
            }
        }
        Composition::CustomOracle(_) => {
            for m in 0..size {
                let s = Subset(m as u32);
                if fam.is_consistent(s)? {
                    table.set(s);
                }
            }
        }
    }
    Ok(table)
}

/// Condition flags of the smallest-element theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionFlags {
    /// Exactly one minimal relaxation exists.
    pub unique_minimal: bool,
    /// Every minimal relaxation has a single-point identified set.
    pub all_singleton: bool,
    /// No consistent sub-model is nested in another one whose union with it is refuted.
    pub no_nested_ok: bool,
}

/// All minimal data-consistent relaxations of a family and their union.
#[derive(Debug, Clone)]
pub struct RelaxationReport {
    pub ids: Vec<String>,
    pub minimal_relaxations: Vec<Subset>,
    pub relaxation_sets: Vec<IdentifiedSet>,
    pub mrb: SetUnion,
    pub full_model_refuted: bool,
    pub flags: ConditionFlags,
}

/// Serialized form of a [`RelaxationReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelaxationReportJson {
    pub refuted: bool,
    pub minimal_relaxations: Vec<Vec<String>>,
    pub mrb: SetUnion,
    pub flags: ConditionFlags,
}

impl RelaxationReport {
    /// Labels of each minimal relaxation.
    pub fn relaxation_labels(&self) -> Vec<Vec<String>> {
        self.minimal_relaxations
            .iter()
            .map(|s| s.indices().into_iter().map(|i| self.ids[i].clone()).collect())
            .collect()
    }

    /// The JSON view.
    pub fn to_json(&self) -> RelaxationReportJson {
        RelaxationReportJson {
            refuted: self.full_model_refuted,
            minimal_relaxations: self.relaxation_labels(),
            mrb: self.mrb.clone(),
            flags: self.flags,
        }
    }

    /// The MRB as an identified set.
    pub fn mrb_set(&self) -> IdentifiedSet {
        IdentifiedSet::Union(self.mrb.clone())
    }
}

/// Finds every minimal data-consistent relaxation and the MRB.
///
/// When the full family is consistent it is its own unique relaxation and
/// the lattice is not searched.
pub fn find_minimal_relaxations(fam: &AssumptionFamily) -> Result<RelaxationReport> {
    let full = fam.full();
    let dim = fam.space().dim();
    if fam.is_consistent(full)? {
        let set = fam.identified_set(full)?;
        let flags = ConditionFlags { unique_minimal: true, all_singleton: set.is_singleton()?, no_nested_ok: true };
        return Ok(RelaxationReport {
            ids: fam.ids().to_vec(),
            minimal_relaxations: vec![full],
            relaxation_sets: vec![set.clone()],
            mrb: SetUnion::new(dim, vec![set])?,
            full_model_refuted: false,
            flags,
        });
    }
    let table = consistency_table(fam)?;
    let minimal = table.maximal();
    let sets = minimal.iter().map(|&s| fam.identified_set(s)).collect::<Result<Vec<_>>>()?;
    let mut all_singleton = !sets.is_empty();
    for s in &sets {
        all_singleton &= s.is_singleton()?;
    }
    let no_nested_ok = no_nesting_holds(fam, &table)?;
    Ok(RelaxationReport {
        ids: fam.ids().to_vec(),
        mrb: SetUnion::new(dim, sets.clone())?,
        flags: ConditionFlags { unique_minimal: minimal.len() == 1, all_singleton, no_nested_ok },
        minimal_relaxations: minimal,
        relaxation_sets: sets,
        full_model_refuted: true,
    })
}

/// The three smallest-element flags.
pub fn check_smallest_conditions(fam: &AssumptionFamily) -> Result<ConditionFlags> {
    Ok(find_minimal_relaxations(fam)?.flags)
}

/// Exhaustive check that `Θ(A') ⊆ Θ(A'')` with `Θ(A')` nonempty forces `Θ(A' ∪ A'')` nonempty.
///
/// Only consistent pairs can violate the condition. Under the intersection
/// rule the union's set equals `Θ(A')`, so large families are accepted
/// without enumeration; oracle-backed families beyond the budget are errors.
fn no_nesting_holds(fam: &AssumptionFamily, table: &ConsistencyTable) -> Result<bool> {
    let consistent: Vec<Subset> = table.consistent().collect();
    if consistent.len() > PAIR_BUDGET {
        return if fam.is_intersection_rule() {
            Ok(true)
        } else {
            Err(Error::Budget { size: consistent.len(), limit: PAIR_BUDGET })
        };
    }
    let mut cache: HashMap<Subset, IdentifiedSet> = HashMap::new();
    for &s in &consistent {
        cache.insert(s, fam.identified_set(s)?);
    }
    for &a in &consistent {
        for &b in &consistent {
            if a == b || table.get(a.union(b)) {
                continue;
            }
            if is_subset(&cache[&a], &cache[&b])? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

//! Discordance certificates and nonconflicting-statement checks.

use std::collections::HashMap;

use serde::Serialize;

use super::family::{AssumptionFamily, Subset};
use super::search::{consistency_table, find_minimal_relaxations};
use crate::error::{Error, Result};
use crate::setcore::{intersect, is_subset, IdentifiedSet};

/// Consistent subsets compared pairwise when searching an oracle-backed family.
const ORACLE_PAIR_BUDGET: usize = 1 << 12;

/// Two data-consistent sub-models with disjoint identified sets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscordanceCertificate {
    pub submodel_a: Subset,
    pub submodel_b: Subset,
    pub set_a: IdentifiedSet,
    pub set_b: IdentifiedSet,
}

/// Searches for two consistent sub-models with disjoint identified sets.
///
/// Returns `None` when the full family is consistent. Candidate pairs are
/// visited in increasing total size, then ascending bitmask order, so the
/// smallest certificate is reported. Under the intersection rule it is
/// enough to pair consistent subsets with single atoms: if `S1`, `S2` are
/// disjoint then extending `S1` to a maximal consistent `M` leaves some
/// `a ∈ S2` outside `M`, and `M` and `{a}` are disjoint.
pub fn find_discordance(fam: &AssumptionFamily) -> Result<Option<DiscordanceCertificate>> {
    if fam.is_consistent(fam.full())? {
        return Ok(None);
    }
    let table = consistency_table(fam)?;
    let mut consistent: Vec<Subset> = table.consistent().collect();
    consistent.sort_by_key(|s| (s.len(), s.0));
    let n = fam.len();
    if fam.is_intersection_rule() {
        let mut candidates: Vec<(usize, Subset, usize)> = Vec::new();
        for &s in &consistent {
            for a in 0..n {
                if !s.contains(a) && table.get(Subset::EMPTY.with(a)) && !table.get(s.with(a)) {
                    let single = Subset::EMPTY.with(a);
                    if s.len() == 1 && single.0 < s.0 {
                        continue;
                    }
                    candidates.push((s.len() + 1, s, a));
                }
            }
        }
        candidates.sort_by_key(|&(size, s, a)| (size, s.0, a));
        if let Some(&(_, s, a)) = candidates.first() {
            let single = Subset::EMPTY.with(a);
            return Ok(Some(DiscordanceCertificate {
                submodel_a: s,
                submodel_b: single,
                set_a: fam.identified_set(s)?,
                set_b: fam.identified_set(single)?,
            }));
        }
        return Ok(None);
    }
    if consistent.len() > ORACLE_PAIR_BUDGET {
        return Err(Error::Budget { size: consistent.len(), limit: ORACLE_PAIR_BUDGET });
    }
    let mut cache: HashMap<Subset, IdentifiedSet> = HashMap::new();
    for &s in &consistent {
        cache.insert(s, fam.identified_set(s)?);
    }
    let mut pairs: Vec<(usize, Subset, Subset)> = Vec::new();
    for (i, &x) in consistent.iter().enumerate() {
        for &y in &consistent[i + 1..] {
            pairs.push((x.len() + y.len(), x, y));
        }
    }
    pairs.sort_by_key(|&(size, x, y)| (size, x.0.min(y.0), x.0.max(y.0)));
    for (_, x, y) in pairs {
        let (x, y) = if x.0 <= y.0 { (x, y) } else { (y, x) };
        if intersect(&cache[&x], &cache[&y])?.is_empty()? {
            return Ok(Some(DiscordanceCertificate {
                submodel_a: x,
                submodel_b: y,
                set_a: cache[&x].clone(),
                set_b: cache[&y].clone(),
            }));
        }
    }
    Ok(None)
}

/// Whether statement `s` is implied by some data-consistent sub-model and rejected by none.
///
/// Both conditions are checked on the maximal consistent subsets only,
/// which is equivalent under the intersection rule because sub-model sets
/// shrink as assumptions are added.
pub fn is_nonconflicting(fam: &AssumptionFamily, s: &IdentifiedSet) -> Result<bool> {
    if !fam.is_intersection_rule() {
        return Err(Error::Unsupported(
            "nonconflicting checks reduce to maximal consistent subsets only under the intersection rule".into(),
        ));
    }
    let report = find_minimal_relaxations(fam)?;
    let mut implied = false;
    for set in &report.relaxation_sets {
        if intersect(set, s)?.is_empty()? {
            return Ok(false);
        }
        if !implied && is_subset(set, s)? {
            implied = true;
        }
    }
    Ok(implied)
}

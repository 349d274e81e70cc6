//! Assumption families and subsets of them.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::setcore::{intersect, IdentifiedSet};

/// Largest family size handled by the exhaustive bitmask search.
pub const MAX_FAMILY: usize = 24;

/// A subset of a family, encoded as a bitmask over assumption indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subset(pub u32);

impl Subset {
    /// The empty subset.
    pub const EMPTY: Subset = Subset(0);

    /// All of the first `n` assumptions.
    pub fn full(n: usize) -> Subset {
        if n >= 32 {
            Subset(u32::MAX)
        } else {
            Subset((1u32 << n) - 1)
        }
    }

    /// Subset with the given member indices.
    pub fn from_indices(ix: &[usize]) -> Subset {
        Subset(ix.iter().fold(0, |m, &i| m | (1 << i)))
    }

    /// Whether index `i` is a member.
    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    /// This subset plus index `i`.
    pub fn with(self, i: usize) -> Subset {
        Subset(self.0 | (1 << i))
    }

    /// Union of two subsets.
    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    /// Whether `self ⊆ other`.
    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    /// Number of members.
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// True for the empty subset.
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Member indices in increasing order.
    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|&i| self.contains(i)).collect()
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.indices().iter().map(|i| format!("a{}", i + 1)).collect::<Vec<_>>().join(","))
    }
}

/// Identified sets of arbitrary sub-models, supplied by a model module.
pub trait SubmodelOracle: Send + Sync {
    /// The identified set of the sub-model made of `members`.
    fn identified_set(&self, members: Subset) -> Result<IdentifiedSet>;

    /// Whether the sub-model is data-consistent. Override when a cheaper exact test exists.
    fn is_consistent(&self, members: Subset) -> Result<bool> {
        Ok(!self.identified_set(members)?.is_empty()?)
    }
}

/// How identified sets of sub-models are obtained.
#[derive(Clone)]
pub enum Composition {
    /// `Θ_I(B)` is the intersection of the atom sets of `B`.
    IntersectionRule,
    /// `Θ_I(B)` is computed by a model-specific oracle.
    CustomOracle(Arc<dyn SubmodelOracle>),
}

impl fmt::Debug for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Composition::IntersectionRule => write!(f, "IntersectionRule"),
            Composition::CustomOracle(_) => write!(f, "CustomOracle"),
        }
    }
}

/// A finite indexed family of assumptions.
#[derive(Debug, Clone)]
pub struct AssumptionFamily {
    ids: Vec<String>,
    atom_sets: Vec<IdentifiedSet>,
    space: IdentifiedSet,
    composition: Composition,
}

impl AssumptionFamily {
    /// Family whose sub-models are intersections of the atom sets; `space` is `Θ_I(∅)`.
    pub fn intersection(ids: Vec<String>, atom_sets: Vec<IdentifiedSet>, space: IdentifiedSet) -> Result<Self> {
        if ids.len() != atom_sets.len() {
            return Err(Error::Invalid(format!("{} ids but {} atom sets", ids.len(), atom_sets.len())));
        }
        for s in &atom_sets {
            if s.dim() != space.dim() {
                return Err(Error::Dimension { expected: space.dim(), found: s.dim() });
            }
        }
        check_ids(&ids)?;
        Ok(AssumptionFamily { ids, atom_sets, space, composition: Composition::IntersectionRule })
    }

    /// Family of one-dimensional interval atoms labeled `a1, a2, ...` inside the whole real line.
    pub fn of_intervals(atoms: Vec<crate::setcore::Interval1D>) -> Self {
        let ids = (1..=atoms.len()).map(|i| format!("a{i}")).collect();
        let sets = atoms.into_iter().map(IdentifiedSet::from).collect();
        AssumptionFamily::intersection(ids, sets, IdentifiedSet::whole(1)).expect("interval family")
    }

    /// Family whose identified sets come from `oracle`; `space` is `Θ_I(∅)`.
    pub fn custom(ids: Vec<String>, space: IdentifiedSet, oracle: Arc<dyn SubmodelOracle>) -> Result<Self> {
        check_ids(&ids)?;
        Ok(AssumptionFamily { ids, atom_sets: Vec::new(), space, composition: Composition::CustomOracle(oracle) })
    }

    /// Assumption labels.
    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    /// Number of assumptions.
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    /// True for a family without assumptions.
    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Atom sets (only populated under the intersection rule).
    pub fn atom_sets(&self) -> &[IdentifiedSet] {
        &self.atom_sets
    }

    /// The parameter space `Θ = Θ_I(∅)`.
    pub fn space(&self) -> &IdentifiedSet {
        &self.space
    }

    /// The composition rule.
    pub fn composition(&self) -> &Composition {
        &self.composition
    }

    /// True under the intersection rule.
    pub fn is_intersection_rule(&self) -> bool {
        matches!(self.composition, Composition::IntersectionRule)
    }

    /// The subset made of the given labels.
    pub fn subset(&self, labels: &[&str]) -> Result<Subset> {
        let mut s = Subset::EMPTY;
        for l in labels {
            let i = self.ids.iter().position(|x| x == l).ok_or_else(|| Error::Key((*l).to_string()))?;
            s = s.with(i);
        }
        Ok(s)
    }

    /// Labels of the members of `s`.
    pub fn labels(&self, s: Subset) -> Vec<String> {
        s.indices().into_iter().filter(|&i| i < self.ids.len()).map(|i| self.ids[i].clone()).collect()
    }

    /// The full family `A`.
    pub fn full(&self) -> Subset {
        Subset::full(self.ids.len())
    }

    fn check_member(&self, b: Subset) -> Result<()> {
        if !b.is_subset_of(self.full()) {
            let bad = b.indices().into_iter().find(|&i| i >= self.ids.len()).unwrap_or(0);
            return Err(Error::Key(format!("index {bad}")));
        }
        Ok(())
    }

    /// `Θ_I(B)`; the empty subset gives the whole parameter space.
    pub fn identified_set(&self, b: Subset) -> Result<IdentifiedSet> {
        self.check_member(b)?;
        match &self.composition {
            Composition::IntersectionRule => {
                let mut acc = self.space.clone();
                for i in b.indices() {
                    acc = intersect(&acc, &self.atom_sets[i])?;
                }
                Ok(acc)
            }
            Composition::CustomOracle(o) => {
                if b.is_empty() {
                    Ok(self.space.clone())
                } else {
                    o.identified_set(b)
                }
            }
        }
    }

    /// Whether `Θ_I(B)` is nonempty.
    pub fn is_consistent(&self, b: Subset) -> Result<bool> {
        self.check_member(b)?;
        match &self.composition {
            Composition::CustomOracle(o) if !b.is_empty() => o.is_consistent(b),
            _ => Ok(!self.identified_set(b)?.is_empty()?),
        }
    }
}

fn check_ids(ids: &[String]) -> Result<()> {
    if ids.len() > MAX_FAMILY {
        return Err(Error::Budget { size: ids.len(), limit: MAX_FAMILY });
    }
    for (i, a) in ids.iter().enumerate() {
        if ids[..i].contains(a) {
            return Err(Error::Invalid(format!("duplicate assumption id `{a}`")));
        }
    }
    Ok(())
}

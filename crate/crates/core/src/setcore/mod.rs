//! Identified-set representations and the set algebra used by every model.
//!
//! Four concrete representations are supported (interval, box, H-polytope,
//! grid mask) together with finite unions of them. Intersections are exact
//! for interval, box and polytope operands; anything intersected with a grid
//! is evaluated pointwise on that grid.

pub mod boxkd;
pub mod fm;
pub mod grid;
pub mod interval;
pub mod polytope;

use serde::{Deserialize, Serialize};

pub use boxkd::BoxKD;
pub use grid::{axis_by_step, axis_linspace, GridSet};
pub use interval::{merge_intervals, Interval1D};
pub use polytope::{HPolytope, HalfSpace};

use crate::error::{Error, Result};

/// Absolute tolerance for endpoint comparisons.
pub const TOL: f64 = 1e-12;

/// Serde helpers writing non-finite reals as the strings `"+inf"`, `"-inf"`.
pub mod real {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if *v > 0.0 {
            s.serialize_str("+inf")
        } else if *v < 0.0 {
            s.serialize_str("-inf")
        } else {
            s.serialize_str("nan")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "+inf" | "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                other => Err(de::Error::custom(format!("invalid real `{other}`"))),
            },
        }
    }
}

/// A finite union of identified sets of a common dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetUnion {
    pub dim: usize,
    pub parts: Vec<IdentifiedSet>,
}

impl SetUnion {
    /// Builds a union, checking dimensions of every part.
    pub fn new(dim: usize, parts: Vec<IdentifiedSet>) -> Result<Self> {
        for p in &parts {
            if p.dim() != dim {
                return Err(Error::Dimension { expected: dim, found: p.dim() });
            }
        }
        Ok(SetUnion { dim, parts })
    }
}

/// A set of parameter values in one of the supported representations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum IdentifiedSet {
    Interval(Interval1D),
    Box(BoxKD),
    Polytope(HPolytope),
    Grid(GridSet),
    Union(SetUnion),
}

impl From<Interval1D> for IdentifiedSet {
    fn from(v: Interval1D) -> Self {
        IdentifiedSet::Interval(v)
    }
}

impl From<BoxKD> for IdentifiedSet {
    fn from(v: BoxKD) -> Self {
        IdentifiedSet::Box(v)
    }
}

impl From<HPolytope> for IdentifiedSet {
    fn from(v: HPolytope) -> Self {
        IdentifiedSet::Polytope(v)
    }
}

impl From<GridSet> for IdentifiedSet {
    fn from(v: GridSet) -> Self {
        IdentifiedSet::Grid(v)
    }
}

impl From<SetUnion> for IdentifiedSet {
    fn from(v: SetUnion) -> Self {
        IdentifiedSet::Union(v)
    }
}

impl IdentifiedSet {
    /// The whole space `R^dim` (an unbounded interval in one dimension).
    pub fn whole(dim: usize) -> Self {
        if dim == 1 {
            Interval1D::whole().into()
        } else {
            BoxKD::whole(dim).into()
        }
    }

    /// The empty set of dimension `dim`.
    pub fn empty(dim: usize) -> Self {
        IdentifiedSet::Union(SetUnion { dim, parts: Vec::new() })
    }

    /// Dimension of the ambient space.
    pub fn dim(&self) -> usize {
        match self {
            IdentifiedSet::Interval(_) => 1,
            IdentifiedSet::Box(b) => b.dim(),
            IdentifiedSet::Polytope(p) => p.dim,
            IdentifiedSet::Grid(g) => g.dim(),
            IdentifiedSet::Union(u) => u.dim,
        }
    }

    /// The set as a polytope, when it is convex (interval, box or polytope).
    pub fn as_polytope(&self) -> Option<HPolytope> {
        match self {
            IdentifiedSet::Interval(iv) => Some(HPolytope::from(iv)),
            IdentifiedSet::Box(b) => Some(HPolytope::from(b)),
            IdentifiedSet::Polytope(p) => Some(p.clone()),
            _ => None,
        }
    }

    /// Decides emptiness (polytopes by Fourier–Motzkin elimination).
    pub fn is_empty(&self) -> Result<bool> {
        match self {
            IdentifiedSet::Interval(iv) => Ok(iv.is_empty()),
            IdentifiedSet::Box(b) => Ok(b.is_empty()),
            IdentifiedSet::Polytope(p) => p.is_empty(),
            IdentifiedSet::Grid(g) => Ok(g.is_empty()),
            IdentifiedSet::Union(u) => {
                for p in &u.parts {
                    if !p.is_empty()? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// Point membership (grid sets use nearest-cell membership).
    pub fn contains(&self, x: &[f64]) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        match self {
            IdentifiedSet::Interval(iv) => iv.contains(x[0]),
            IdentifiedSet::Box(b) => b.contains(x),
            IdentifiedSet::Polytope(p) => p.contains(x),
            IdentifiedSet::Grid(g) => g.contains(x),
            IdentifiedSet::Union(u) => u.parts.iter().any(|p| p.contains(x)),
        }
    }

    /// Drops empty parts of unions (recursively) and flattens nested unions.
    pub fn simplify(&self) -> Result<IdentifiedSet> {
        match self {
            IdentifiedSet::Union(u) => {
                let mut parts = Vec::new();
                for p in &u.parts {
                    match p.simplify()? {
                        IdentifiedSet::Union(inner) => parts.extend(inner.parts),
                        other => {
                            if !other.is_empty()? {
                                parts.push(other)
                            }
                        }
                    }
                }
                Ok(IdentifiedSet::Union(SetUnion { dim: u.dim, parts }))
            }
            other => Ok(other.clone()),
        }
    }

    /// Per-coordinate enclosing box, `None` when the set is empty.
    pub fn bounding_box(&self) -> Result<Option<BoxKD>> {
        let b = match self {
            IdentifiedSet::Interval(iv) => BoxKD::new(vec![*iv]),
            IdentifiedSet::Box(b) => b.clone(),
            IdentifiedSet::Polytope(p) => p.bounding_box()?,
            IdentifiedSet::Grid(g) => {
                let mut acc: Option<BoxKD> = None;
                for p in g.marked_points() {
                    let pb = BoxKD::new(p.iter().map(|&v| Interval1D::point(v)).collect());
                    acc = Some(match acc {
                        None => pb,
                        Some(a) => a.hull(&pb),
                    });
                }
                return Ok(acc);
            }
            IdentifiedSet::Union(u) => {
                let mut acc: Option<BoxKD> = None;
                for p in &u.parts {
                    if let Some(pb) = p.bounding_box()? {
                        acc = Some(match acc {
                            None => pb,
                            Some(a) => a.hull(&pb),
                        });
                    }
                }
                return Ok(acc);
            }
        };
        Ok(if b.is_empty() { None } else { Some(b) })
    }

    /// True iff the set is exactly one point (up to the crate tolerance).
    pub fn is_singleton(&self) -> Result<bool> {
        Ok(match self.bounding_box()? {
            None => false,
            Some(b) => b.dims.iter().all(Interval1D::is_singleton),
        })
    }

    /// Largest per-coordinate extent (zero for empty sets and points).
    pub fn max_width(&self) -> Result<f64> {
        Ok(match self.bounding_box()? {
            None => 0.0,
            Some(b) => b.dims.iter().map(Interval1D::width).fold(0.0, f64::max),
        })
    }

    /// For one-dimensional sets, the normalized list of disjoint intervals.
    pub fn as_intervals(&self) -> Option<Vec<Interval1D>> {
        fn collect(s: &IdentifiedSet, out: &mut Vec<Interval1D>) -> bool {
            match s {
                IdentifiedSet::Interval(iv) => {
                    out.push(*iv);
                    true
                }
                IdentifiedSet::Box(b) if b.dim() == 1 => {
                    out.push(b.dims[0]);
                    true
                }
                IdentifiedSet::Union(u) => u.parts.iter().all(|p| collect(p, out)),
                _ => false,
            }
        }
        if self.dim() != 1 {
            return None;
        }
        let mut out = Vec::new();
        if collect(self, &mut out) {
            Some(merge_intervals(&out))
        } else {
            None
        }
    }
}

/// Intersection of two identified sets of the same dimension.
///
/// Interval, box and polytope pairs are intersected exactly (mixed convex
/// pairs are promoted to the richer representation); a grid operand turns
/// the result into a grid evaluated pointwise; unions distribute.
pub fn intersect(a: &IdentifiedSet, b: &IdentifiedSet) -> Result<IdentifiedSet> {
    use IdentifiedSet as S;
    if a.dim() != b.dim() {
        return Err(Error::Dimension { expected: a.dim(), found: b.dim() });
    }
    Ok(match (a, b) {
        (S::Union(u), other) | (other, S::Union(u)) => {
            let parts = u.parts.iter().map(|p| intersect(p, other)).collect::<Result<Vec<_>>>()?;
            S::Union(SetUnion { dim: u.dim, parts }).simplify()?
        }
        (S::Grid(g), S::Grid(h)) => {
            if g.same_axes(h) {
                S::Grid(g.and(h)?)
            } else {
                S::Grid(g.filter(|p| h.contains(p)))
            }
        }
        (S::Grid(g), other) | (other, S::Grid(g)) => S::Grid(g.filter(|p| other.contains(p))),
        (S::Interval(x), S::Interval(y)) => S::Interval(x.intersect(y)),
        (S::Interval(x), S::Box(y)) | (S::Box(y), S::Interval(x)) => S::Box(BoxKD::new(vec![*x]).intersect(y)?),
        (S::Box(x), S::Box(y)) => S::Box(x.intersect(y)?),
        (x, y) => {
            let px = x.as_polytope().expect("convex");
            let py = y.as_polytope().expect("convex");
            S::Polytope(px.intersect(&py)?)
        }
    })
}

/// Convenience: emptiness of a standalone set.
pub fn is_empty(s: &IdentifiedSet) -> Result<bool> {
    s.is_empty()
}

/// True iff `a ⊆ b`.
///
/// Decided exactly for convex pairs, grids against anything, one-dimensional
/// unions of intervals, and unions on the left. A multi-dimensional convex
/// set against a union is accepted when it fits inside a single part and is
/// otherwise reported as unsupported.
pub fn is_subset(a: &IdentifiedSet, b: &IdentifiedSet) -> Result<bool> {
    use IdentifiedSet as S;
    if a.dim() != b.dim() {
        return Err(Error::Dimension { expected: b.dim(), found: a.dim() });
    }
    if a.is_empty()? {
        return Ok(true);
    }
    if let S::Union(u) = a {
        for p in &u.parts {
            if !is_subset(p, b)? {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    if let S::Grid(g) = a {
        return Ok(g.marked_points().all(|p| b.contains(&p)));
    }
    if let (Some(xa), Some(xb)) = (a.as_intervals(), b.as_intervals()) {
        return Ok(xa.iter().all(|iv| xb.iter().any(|piece| iv.is_subset_of(piece))));
    }
    match b {
        S::Union(u) => {
            for p in &u.parts {
                if is_subset(a, p)? {
                    return Ok(true);
                }
            }
            Err(Error::Unsupported("containment of a multi-dimensional convex set in a union".into()))
        }
        S::Grid(_) => Err(Error::Unsupported("containment of a convex set in a grid mask".into())),
        _ => {
            let pa = a.as_polytope().expect("convex");
            let pb = b.as_polytope().expect("convex");
            pa.is_subset_of(&pb)
        }
    }
}

/// Whether `s` meets the closed box `bounds` (one `(lo, hi)` pair per axis).
fn meets_box(s: &IdentifiedSet, bounds: &[(f64, f64)]) -> Result<bool> {
    use IdentifiedSet as S;
    match s {
        S::Grid(g) => Ok(g.any_marked_in(bounds)),
        S::Union(u) => {
            for p in &u.parts {
                if meets_box(p, bounds)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        _ => {
            let cell = BoxKD::new(bounds.iter().map(|&(lo, hi)| Interval1D::closed(lo, hi)).collect());
            Ok(!intersect(s, &S::Box(cell))?.is_empty()?)
        }
    }
}

/// Marks every grid point whose cell (bounded by neighbor midpoints) meets `s`.
pub fn cell_mask(s: &IdentifiedSet, axes: &[Vec<f64>]) -> Result<GridSet> {
    if s.dim() != axes.len() {
        return Err(Error::Dimension { expected: axes.len(), found: s.dim() });
    }
    let probe = GridSet::full(axes.to_vec())?;
    let mut mask = Vec::with_capacity(probe.len());
    let mut ix = vec![0usize; axes.len()];
    for idx in 0..probe.len() {
        let mut rem = idx;
        for k in (0..axes.len()).rev() {
            ix[k] = rem % axes[k].len();
            rem /= axes[k].len();
        }
        let bounds: Vec<(f64, f64)> = (0..axes.len()).map(|k| probe.cell(k, ix[k])).collect();
        mask.push(meets_box(s, &bounds)?);
    }
    GridSet::new(axes.to_vec(), mask)
}

/// Hausdorff-type distance between two sets as seen on a shared grid.
///
/// Each set is rasterized by marking the grid points whose cells it meets.
/// The result is the largest Euclidean distance from a point marked for one
/// set only to the nearest point marked for the other; it is zero iff the
/// rasterizations coincide and `+inf` when exactly one of them is empty.
pub fn hausdorff_on_grid(a: &IdentifiedSet, b: &IdentifiedSet, axes: &[Vec<f64>]) -> Result<f64> {
    let ma = cell_mask(a, axes)?;
    let mb = cell_mask(b, axes)?;
    match (ma.is_empty(), mb.is_empty()) {
        (true, true) => return Ok(0.0),
        (true, false) | (false, true) => return Ok(f64::INFINITY),
        _ => {}
    }
    let pa: Vec<Vec<f64>> = ma.marked_points().collect();
    let pb: Vec<Vec<f64>> = mb.marked_points().collect();
    let dist = |p: &[f64], pool: &[Vec<f64>]| {
        pool.iter()
            .map(|q| p.iter().zip(q).map(|(x, y)| (x - y) * (x - y)).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
            .sqrt()
    };
    let mut worst: f64 = 0.0;
    for i in 0..ma.len() {
        if ma.is_marked(i) != mb.is_marked(i) {
            let p = ma.point(i);
            let d = if ma.is_marked(i) { dist(&p, &pb) } else { dist(&p, &pa) };
            worst = worst.max(d);
        }
    }
    Ok(worst)
}

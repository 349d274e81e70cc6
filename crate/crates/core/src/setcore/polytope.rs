//! Convex polyhedra in H-representation.

use serde::{Deserialize, Serialize};

use super::boxkd::BoxKD;
use super::fm;
use super::interval::Interval1D;
use super::{real, TOL};
use crate::error::{Error, Result};

/// A half-space `coeffs · θ <= rhs`, or `coeffs · θ < rhs` when `strict`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace {
    pub coeffs: Vec<f64>,
    #[serde(with = "real")]
    pub rhs: f64,
    pub strict: bool,
}

impl HalfSpace {
    /// A closed half-space.
    pub fn le(coeffs: Vec<f64>, rhs: f64) -> Self {
        HalfSpace { coeffs, rhs, strict: false }
    }

    /// An open half-space.
    pub fn lt(coeffs: Vec<f64>, rhs: f64) -> Self {
        HalfSpace { coeffs, rhs, strict: true }
    }

    /// Value of `coeffs · x - rhs`.
    pub fn slack_at(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() - self.rhs
    }

    /// The complementary half-space.
    pub fn complement(&self) -> HalfSpace {
        HalfSpace { coeffs: self.coeffs.iter().map(|c| -c).collect(), rhs: -self.rhs, strict: !self.strict }
    }
}

/// A polyhedron `{θ ∈ R^dim : every row holds}`. Intersection is row concatenation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HPolytope {
    pub dim: usize,
    pub rows: Vec<HalfSpace>,
}

impl HPolytope {
    /// Builds a polytope, checking that every row has `dim` coefficients.
    pub fn new(dim: usize, rows: Vec<HalfSpace>) -> Result<Self> {
        for r in &rows {
            if r.coeffs.len() != dim {
                return Err(Error::Dimension { expected: dim, found: r.coeffs.len() });
            }
        }
        Ok(HPolytope { dim, rows })
    }

    /// The whole space `R^dim`.
    pub fn whole(dim: usize) -> Self {
        HPolytope { dim, rows: Vec::new() }
    }

    /// Adds `coeffs · θ <= rhs`.
    pub fn push_le(&mut self, coeffs: Vec<f64>, rhs: f64) {
        self.rows.push(HalfSpace::le(coeffs, rhs));
    }

    /// Adds `coeffs · θ == rhs` as a pair of opposite closed rows.
    pub fn push_eq(&mut self, coeffs: Vec<f64>, rhs: f64) {
        let neg = coeffs.iter().map(|c| -c).collect();
        self.rows.push(HalfSpace::le(coeffs, rhs));
        self.rows.push(HalfSpace::le(neg, -rhs));
    }

    /// Row concatenation.
    pub fn intersect(&self, other: &HPolytope) -> Result<HPolytope> {
        if self.dim != other.dim {
            return Err(Error::Dimension { expected: self.dim, found: other.dim });
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(HPolytope { dim: self.dim, rows })
    }

    /// Decides emptiness by Fourier–Motzkin elimination.
    pub fn is_empty(&self) -> Result<bool> {
        Ok(!fm::is_feasible(self.dim, &self.rows)?)
    }

    /// Exact projection onto one coordinate.
    pub fn project(&self, axis: usize) -> Result<Interval1D> {
        fm::project_axis(self.dim, &self.rows, axis)
    }

    /// Per-coordinate projections (the tightest enclosing box, empty if the polytope is).
    pub fn bounding_box(&self) -> Result<BoxKD> {
        let dims = (0..self.dim).map(|k| self.project(k)).collect::<Result<Vec<_>>>()?;
        Ok(BoxKD::new(dims))
    }

    /// Membership with the crate tolerance (strict rows exclude their boundary).
    pub fn contains(&self, x: &[f64]) -> bool {
        self.contains_tol(x, TOL)
    }

    /// Membership where closed rows accept a violation up to `tol` and strict rows require a margin of `tol`.
    pub fn contains_tol(&self, x: &[f64], tol: f64) -> bool {
        self.rows.iter().all(|r| {
            let s = r.slack_at(x);
            if r.strict {
                s < -tol
            } else {
                s <= tol
            }
        })
    }

    /// True iff `self ⊆ other`, decided by testing every complement row of `other` for emptiness.
    pub fn is_subset_of(&self, other: &HPolytope) -> Result<bool> {
        if self.dim != other.dim {
            return Err(Error::Dimension { expected: other.dim, found: self.dim });
        }
        if self.is_empty()? {
            return Ok(true);
        }
        for r in &other.rows {
            if r.rhs == f64::INFINITY {
                continue;
            }
            let mut rows = self.rows.clone();
            rows.push(r.complement());
            if fm::is_feasible(self.dim, &rows)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl From<&Interval1D> for HPolytope {
    fn from(iv: &Interval1D) -> Self {
        HPolytope::from(&BoxKD::new(vec![*iv]))
    }
}

impl From<&BoxKD> for HPolytope {
    fn from(b: &BoxKD) -> Self {
        let dim = b.dims.len();
        let mut rows = Vec::new();
        if b.is_empty() {
            rows.push(HalfSpace::le(vec![0.0; dim], -1.0));
            return HPolytope { dim, rows };
        }
        for (k, iv) in b.dims.iter().enumerate() {
            if iv.hi.is_finite() {
                let mut c = vec![0.0; dim];
                c[k] = 1.0;
                rows.push(HalfSpace { coeffs: c, rhs: iv.hi, strict: iv.hi_open });
            }
            if iv.lo.is_finite() {
                let mut c = vec![0.0; dim];
                c[k] = -1.0;
                rows.push(HalfSpace { coeffs: c, rhs: -iv.lo, strict: iv.lo_open });
            }
        }
        HPolytope { dim, rows }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paired_rows_give_point() {
        let p = HPolytope::new(1, vec![HalfSpace::le(vec![1.0], 1.0), HalfSpace::le(vec![-1.0], -1.0)]).unwrap();
        assert!(!p.is_empty().unwrap());
    }

    #[test]
    fn strict_row_contradiction() {
        let p = HPolytope::new(1, vec![HalfSpace::le(vec![1.0], 1.0), HalfSpace::lt(vec![-1.0], -1.0)]).unwrap();
        assert!(p.is_empty().unwrap());
    }

    #[test]
    fn subset_by_complement_rows() {
        let small = HPolytope::from(&BoxKD::new(vec![Interval1D::closed(0.2, 0.4), Interval1D::closed(0.0, 1.0)]));
        let big = HPolytope::from(&BoxKD::new(vec![Interval1D::closed(0.0, 1.0), Interval1D::closed(0.0, 1.0)]));
        assert!(small.is_subset_of(&big).unwrap());
        assert!(!big.is_subset_of(&small).unwrap());
    }

    #[test]
    fn open_box_is_subset_of_closed_box_only() {
        let open = HPolytope::from(&Interval1D::open(0.0, 1.0));
        let closed = HPolytope::from(&Interval1D::closed(0.0, 1.0));
        assert!(open.is_subset_of(&closed).unwrap());
        assert!(!closed.is_subset_of(&open).unwrap());
    }
}

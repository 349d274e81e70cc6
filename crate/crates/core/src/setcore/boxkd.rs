//! Axis-aligned boxes: products of one-dimensional intervals.

use serde::{Deserialize, Serialize};

use super::interval::Interval1D;
use crate::error::{Error, Result};

/// A product of intervals. Empty boxes are normalized to all-canonical-empty dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "RawBox")]
pub struct BoxKD {
    pub dims: Vec<Interval1D>,
}

#[derive(Deserialize)]
struct RawBox {
    dims: Vec<Interval1D>,
}

impl From<RawBox> for BoxKD {
    fn from(r: RawBox) -> Self {
        BoxKD::new(r.dims)
    }
}

impl BoxKD {
    /// Builds a box; if any dimension is empty every dimension becomes the canonical empty interval.
    pub fn new(dims: Vec<Interval1D>) -> Self {
        if dims.iter().any(Interval1D::is_empty) {
            BoxKD { dims: vec![Interval1D::empty(); dims.len()] }
        } else {
            BoxKD { dims }
        }
    }

    /// The whole space `R^dim`.
    pub fn whole(dim: usize) -> Self {
        BoxKD { dims: vec![Interval1D::whole(); dim] }
    }

    /// Number of coordinates.
    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    /// True iff some dimension is empty.
    pub fn is_empty(&self) -> bool {
        self.dims.iter().any(Interval1D::is_empty)
    }

    /// Dimension-wise intersection.
    pub fn intersect(&self, other: &BoxKD) -> Result<BoxKD> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension { expected: self.dim(), found: other.dim() });
        }
        Ok(BoxKD::new(self.dims.iter().zip(&other.dims).map(|(a, b)| a.intersect(b)).collect()))
    }

    /// Membership test.
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && self.dims.iter().zip(x).all(|(iv, v)| iv.contains(*v))
    }

    /// Dimension-wise subset test.
    pub fn is_subset_of(&self, other: &BoxKD) -> bool {
        self.is_empty() || self.dims.iter().zip(&other.dims).all(|(a, b)| a.is_subset_of(b))
    }

    /// Dimension-wise hull.
    pub fn hull(&self, other: &BoxKD) -> BoxKD {
        BoxKD::new(self.dims.iter().zip(&other.dims).map(|(a, b)| a.hull(b)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_dimension_empties_the_box() {
        let b = BoxKD::new(vec![Interval1D::closed(0.0, 1.0), Interval1D::closed(2.0, 1.0)]);
        assert!(b.is_empty());
        assert_eq!(b.dims[0], Interval1D::empty());
    }

    #[test]
    fn intersection_is_dimensionwise() {
        let a = BoxKD::new(vec![Interval1D::closed(0.0, 2.0), Interval1D::closed(0.0, 2.0)]);
        let b = BoxKD::new(vec![Interval1D::closed(1.0, 3.0), Interval1D::closed(-1.0, 1.0)]);
        let c = a.intersect(&b).unwrap();
        assert_eq!(c.dims, vec![Interval1D::closed(1.0, 2.0), Interval1D::closed(0.0, 1.0)]);
    }
}

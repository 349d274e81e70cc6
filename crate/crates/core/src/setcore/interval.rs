//! One-dimensional intervals with independent open/closed endpoints.

use serde::{Deserialize, Serialize};

use super::{real, TOL};

/// An interval of the real line, `[lo, hi]`, `(lo, hi]`, `[lo, hi)` or `(lo, hi)`.
///
/// Infinite endpoints are always open. Empty intervals are stored in the
/// canonical form `lo = +inf, hi = -inf`, both ends open, so equality on
/// empty intervals is structural.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "RawInterval")]
pub struct Interval1D {
    #[serde(with = "real")]
    pub lo: f64,
    #[serde(with = "real")]
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

#[derive(Deserialize)]
struct RawInterval {
    #[serde(with = "real")]
    lo: f64,
    #[serde(with = "real")]
    hi: f64,
    lo_open: bool,
    hi_open: bool,
}

impl From<RawInterval> for Interval1D {
    fn from(r: RawInterval) -> Self {
        Interval1D::new(r.lo, r.hi, r.lo_open, r.hi_open)
    }
}

impl Interval1D {
    /// Builds an interval and normalizes it (empty intervals become canonical).
    pub fn new(lo: f64, hi: f64, lo_open: bool, hi_open: bool) -> Self {
        if lo.is_nan() || hi.is_nan() {
            return Self::empty();
        }
        let lo_open = lo_open || lo.is_infinite();
        let hi_open = hi_open || hi.is_infinite();
        let iv = Interval1D { lo, hi, lo_open, hi_open };
        if iv.raw_is_empty() {
            Self::empty()
        } else {
            iv
        }
    }

    /// The closed interval `[lo, hi]`.
    pub fn closed(lo: f64, hi: f64) -> Self {
        Self::new(lo, hi, false, false)
    }

    /// The open interval `(lo, hi)`.
    pub fn open(lo: f64, hi: f64) -> Self {
        Self::new(lo, hi, true, true)
    }

    /// The degenerate interval `[x, x]`.
    pub fn point(x: f64) -> Self {
        Self::closed(x, x)
    }

    /// The canonical empty interval.
    pub fn empty() -> Self {
        Interval1D { lo: f64::INFINITY, hi: f64::NEG_INFINITY, lo_open: true, hi_open: true }
    }

    /// The whole real line.
    pub fn whole() -> Self {
        Interval1D { lo: f64::NEG_INFINITY, hi: f64::INFINITY, lo_open: true, hi_open: true }
    }

    fn raw_is_empty(&self) -> bool {
        if self.lo == f64::INFINITY || self.hi == f64::NEG_INFINITY {
            return true;
        }
        let gap = self.hi - self.lo;
        if gap > TOL {
            false
        } else if gap >= -TOL {
            self.lo_open || self.hi_open
        } else {
            true
        }
    }

    /// True iff the interval contains no point.
    pub fn is_empty(&self) -> bool {
        self.raw_is_empty()
    }

    /// True iff the interval is a single point.
    pub fn is_singleton(&self) -> bool {
        !self.is_empty() && (self.hi - self.lo).abs() <= TOL
    }

    /// Length `hi - lo` (zero for empty intervals).
    pub fn width(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.hi - self.lo
        }
    }

    /// Membership test honoring open endpoints with the crate tolerance.
    pub fn contains(&self, x: f64) -> bool {
        if self.is_empty() {
            return false;
        }
        let above = if self.lo_open { x > self.lo + TOL } else { x >= self.lo - TOL };
        let below = if self.hi_open { x < self.hi - TOL } else { x <= self.hi + TOL };
        above && below
    }

    /// Exact intersection.
    pub fn intersect(&self, other: &Interval1D) -> Interval1D {
        if self.is_empty() || other.is_empty() {
            return Self::empty();
        }
        let (lo, lo_open) = tighter_lower(self.lo, self.lo_open, other.lo, other.lo_open);
        let (hi, hi_open) = tighter_upper(self.hi, self.hi_open, other.hi, other.hi_open);
        Self::new(lo, hi, lo_open, hi_open)
    }

    /// True iff `self` is a subset of `other`.
    pub fn is_subset_of(&self, other: &Interval1D) -> bool {
        if self.is_empty() {
            return true;
        }
        if other.is_empty() {
            return false;
        }
        lower_within(self.lo, self.lo_open, other.lo, other.lo_open)
            && upper_within(self.hi, self.hi_open, other.hi, other.hi_open)
    }

    /// Smallest interval containing both operands (closed hull, flags kept when the endpoint is shared).
    pub fn hull(&self, other: &Interval1D) -> Interval1D {
        if self.is_empty() {
            return *other;
        }
        if other.is_empty() {
            return *self;
        }
        let (lo, lo_open) = if (self.lo - other.lo).abs() <= TOL {
            (self.lo.min(other.lo), self.lo_open && other.lo_open)
        } else if self.lo < other.lo {
            (self.lo, self.lo_open)
        } else {
            (other.lo, other.lo_open)
        };
        let (hi, hi_open) = if (self.hi - other.hi).abs() <= TOL {
            (self.hi.max(other.hi), self.hi_open && other.hi_open)
        } else if self.hi > other.hi {
            (self.hi, self.hi_open)
        } else {
            (other.hi, other.hi_open)
        };
        Self::new(lo, hi, lo_open, hi_open)
    }

    /// The closure `[lo, hi]` of a nonempty interval.
    pub fn closure(&self) -> Interval1D {
        if self.is_empty() {
            *self
        } else {
            Interval1D { lo: self.lo, hi: self.hi, lo_open: self.lo.is_infinite(), hi_open: self.hi.is_infinite() }
        }
    }
}

fn tighter_lower(a: f64, a_open: bool, b: f64, b_open: bool) -> (f64, bool) {
    if (a - b).abs() <= TOL || a == b {
        (a.max(b), a_open || b_open)
    } else if a > b {
        (a, a_open)
    } else {
        (b, b_open)
    }
}

fn tighter_upper(a: f64, a_open: bool, b: f64, b_open: bool) -> (f64, bool) {
    if (a - b).abs() <= TOL || a == b {
        (a.min(b), a_open || b_open)
    } else if a < b {
        (a, a_open)
    } else {
        (b, b_open)
    }
}

/// Lower endpoint `(a, a_open)` lies inside the half-line bounded below by `(b, b_open)`.
fn lower_within(a: f64, a_open: bool, b: f64, b_open: bool) -> bool {
    if a == b || (a - b).abs() <= TOL {
        a_open || !b_open
    } else {
        a > b
    }
}

fn upper_within(a: f64, a_open: bool, b: f64, b_open: bool) -> bool {
    if a == b || (a - b).abs() <= TOL {
        a_open || !b_open
    } else {
        a < b
    }
}

/// Merges a list of intervals into sorted, pairwise disjoint, non-touching pieces.
pub fn merge_intervals(parts: &[Interval1D]) -> Vec<Interval1D> {
    let mut items: Vec<Interval1D> = parts.iter().copied().filter(|p| !p.is_empty()).collect();
    items.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap().then(a.lo_open.cmp(&b.lo_open)));
    let mut out: Vec<Interval1D> = Vec::new();
    for iv in items {
        if let Some(last) = out.last_mut() {
            let gap = iv.lo - last.hi;
            let joins = if gap < -TOL {
                true
            } else if gap <= TOL {
                !(last.hi_open && iv.lo_open)
            } else {
                false
            };
            if joins {
                *last = last.hull(&iv);
                continue;
            }
        }
        out.push(iv);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossed_interval_is_empty() {
        let iv = Interval1D::closed(0.6, 0.4);
        assert!(iv.is_empty());
        assert_eq!(iv, Interval1D::empty());
    }

    #[test]
    fn disjoint_closed_intervals_intersect_to_empty() {
        let a = Interval1D::closed(1.0, 2.0);
        let b = Interval1D::closed(3.0, 4.0);
        assert!(a.intersect(&b).is_empty());
    }

    #[test]
    fn identity_intersection() {
        let a = Interval1D::closed(0.0, 5.0);
        assert_eq!(a.intersect(&a), a);
    }

    #[test]
    fn nested_intersection_returns_inner() {
        let inner = Interval1D::closed(1.0, 2.0);
        let outer = Interval1D::closed(0.0, 5.0);
        assert_eq!(inner.intersect(&outer), inner);
    }

    #[test]
    fn touching_endpoints_depend_on_flags() {
        let a = Interval1D::closed(0.0, 1.0);
        assert!(a.intersect(&Interval1D::closed(1.0, 2.0)).is_singleton());
        assert!(a.intersect(&Interval1D::new(1.0, 2.0, true, false)).is_empty());
    }

    #[test]
    fn open_singleton_is_empty() {
        assert!(Interval1D::new(0.5, 0.5, true, false).is_empty());
        assert!(!Interval1D::point(0.5).is_empty());
    }

    #[test]
    fn merge_joins_touching_closed_pieces() {
        let m = merge_intervals(&[
            Interval1D::closed(2.0, 3.0),
            Interval1D::closed(0.0, 1.0),
            Interval1D::closed(1.0, 2.0),
        ]);
        assert_eq!(m, vec![Interval1D::closed(0.0, 3.0)]);
        let m = merge_intervals(&[Interval1D::new(0.0, 1.0, false, true), Interval1D::new(1.0, 2.0, true, false)]);
        assert_eq!(m.len(), 2);
    }

    #[test]
    fn subset_respects_open_ends() {
        let open = Interval1D::open(0.0, 1.0);
        let closed = Interval1D::closed(0.0, 1.0);
        assert!(open.is_subset_of(&closed));
        assert!(!closed.is_subset_of(&open));
    }
}

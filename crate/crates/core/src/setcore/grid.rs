//! Sets represented by a boolean mask over a rectangular grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Membership mask over the Cartesian product of per-axis sorted grids.
///
/// The mask is stored in row-major order: the last axis varies fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid", into = "RawGrid")]
pub struct GridSet {
    axes: Vec<Vec<f64>>,
    mask: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct RawGrid {
    axes: Vec<Vec<f64>>,
    mask_rle: Vec<(bool, usize)>,
}

impl TryFrom<RawGrid> for GridSet {
    type Error = Error;
    fn try_from(r: RawGrid) -> Result<Self> {
        GridSet::new(r.axes, rle_decode(&r.mask_rle))
    }
}

impl From<GridSet> for RawGrid {
    fn from(g: GridSet) -> Self {
        let mask_rle = rle_encode(&g.mask);
        RawGrid { axes: g.axes, mask_rle }
    }
}

/// Run-length encoding of a boolean mask as `(value, run length)` pairs.
pub fn rle_encode(mask: &[bool]) -> Vec<(bool, usize)> {
    let mut out: Vec<(bool, usize)> = Vec::new();
    for &m in mask {
        match out.last_mut() {
            Some((v, n)) if *v == m => *n += 1,
            _ => out.push((m, 1)),
        }
    }
    out
}

/// Inverse of [`rle_encode`].
pub fn rle_decode(runs: &[(bool, usize)]) -> Vec<bool> {
    runs.iter().flat_map(|&(v, n)| std::iter::repeat(v).take(n)).collect()
}

/// Evenly spaced grid `lo, lo + step, ...` up to `hi` (inclusive within 1e-9 of a step).
pub fn axis_by_step(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0 && hi >= lo, "axis_by_step needs step > 0 and hi >= lo");
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| lo + i as f64 * step).collect()
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn axis_linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

impl GridSet {
    /// Builds a grid set, checking sortedness and mask length.
    pub fn new(axes: Vec<Vec<f64>>, mask: Vec<bool>) -> Result<Self> {
        for ax in &axes {
            if ax.is_empty() || ax.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(Error::Invalid("grid axes must be nonempty and strictly increasing".into()));
            }
        }
        let n: usize = axes.iter().map(Vec::len).product();
        if n != mask.len() {
            return Err(Error::Invalid(format!("mask length {} does not match grid size {}", mask.len(), n)));
        }
        Ok(GridSet { axes, mask })
    }

    /// Evaluates `f` at every grid point.
    pub fn from_fn(axes: Vec<Vec<f64>>, mut f: impl FnMut(&[f64]) -> bool) -> Result<Self> {
        let probe = GridSet::new(axes.clone(), vec![false; axes.iter().map(Vec::len).product()])?;
        let mut mask = Vec::with_capacity(probe.len());
        let mut p = vec![0.0; axes.len()];
        for idx in 0..probe.len() {
            probe.point_into(idx, &mut p);
            mask.push(f(&p));
        }
        GridSet::new(axes, mask)
    }

    /// Every grid point marked.
    pub fn full(axes: Vec<Vec<f64>>) -> Result<Self> {
        let n = axes.iter().map(Vec::len).product();
        GridSet::new(axes, vec![true; n])
    }

    /// The per-axis grids.
    pub fn axes(&self) -> &[Vec<f64>] {
        &self.axes
    }

    /// The membership mask (row-major, last axis fastest).
    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// Number of dimensions.
    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.mask.len()
    }

    /// Number of marked points.
    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    /// True iff no point is marked.
    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&m| m)
    }

    /// Whether the flat index `idx` is marked.
    pub fn is_marked(&self, idx: usize) -> bool {
        self.mask[idx]
    }

    /// Writes the coordinates of flat index `idx` into `out`.
    pub fn point_into(&self, mut idx: usize, out: &mut [f64]) {
        for k in (0..self.axes.len()).rev() {
            let n = self.axes[k].len();
            out[k] = self.axes[k][idx % n];
            idx /= n;
        }
    }

    /// Coordinates of flat index `idx`.
    pub fn point(&self, idx: usize) -> Vec<f64> {
        let mut p = vec![0.0; self.axes.len()];
        self.point_into(idx, &mut p);
        p
    }

    /// Flat index of the multi-index `ix`.
    pub fn flat_index(&self, ix: &[usize]) -> usize {
        ix.iter().zip(&self.axes).fold(0, |acc, (&i, ax)| acc * ax.len() + i)
    }

    /// Iterator over marked points.
    pub fn marked_points(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.len()).filter(|&i| self.mask[i]).map(|i| self.point(i))
    }

    /// Same axes (within 1e-12 per coordinate).
    pub fn same_axes(&self, other: &GridSet) -> bool {
        self.axes.len() == other.axes.len()
            && self
                .axes
                .iter()
                .zip(&other.axes)
                .all(|(a, b)| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-12))
    }

    /// Half-open cell `[lower, upper]` around point `i` of axis `k`, bounded by neighbor midpoints.
    pub fn cell(&self, k: usize, i: usize) -> (f64, f64) {
        let ax = &self.axes[k];
        let g = ax[i];
        let left = if i > 0 {
            (g - ax[i - 1]) / 2.0
        } else if ax.len() > 1 {
            (ax[1] - g) / 2.0
        } else {
            0.0
        };
        let right = if i + 1 < ax.len() {
            (ax[i + 1] - g) / 2.0
        } else if ax.len() > 1 {
            (g - ax[i - 1]) / 2.0
        } else {
            0.0
        };
        (g - left, g + right)
    }

    /// Index of the grid point whose cell contains `x` on axis `k`, if any.
    fn nearest(&self, k: usize, x: f64) -> Option<usize> {
        let ax = &self.axes[k];
        let (lo, _) = self.cell(k, 0);
        let (_, hi) = self.cell(k, ax.len() - 1);
        if x < lo - 1e-12 || x > hi + 1e-12 {
            return None;
        }
        let pos = ax.partition_point(|&g| g < x);
        let cand = if pos == 0 {
            0
        } else if pos == ax.len() {
            ax.len() - 1
        } else if (x - ax[pos - 1]) <= (ax[pos] - x) {
            pos - 1
        } else {
            pos
        };
        Some(cand)
    }

    /// Nearest-cell membership: `x` belongs when the grid point owning its cell is marked.
    pub fn contains(&self, x: &[f64]) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        let mut ix = Vec::with_capacity(x.len());
        for (k, &v) in x.iter().enumerate() {
            match self.nearest(k, v) {
                Some(i) => ix.push(i),
                None => return false,
            }
        }
        self.mask[self.flat_index(&ix)]
    }

    /// True iff some marked grid point lies in the closed box `bounds`.
    pub fn any_marked_in(&self, bounds: &[(f64, f64)]) -> bool {
        let ranges: Vec<(usize, usize)> = self
            .axes
            .iter()
            .zip(bounds)
            .map(|(ax, &(lo, hi))| (ax.partition_point(|&g| g < lo - 1e-12), ax.partition_point(|&g| g <= hi + 1e-12)))
            .collect();
        if ranges.iter().any(|&(a, b)| a >= b) {
            return false;
        }
        let mut ix: Vec<usize> = ranges.iter().map(|r| r.0).collect();
        loop {
            if self.mask[self.flat_index(&ix)] {
                return true;
            }
            let mut k = ix.len();
            loop {
                if k == 0 {
                    return false;
                }
                k -= 1;
                ix[k] += 1;
                if ix[k] < ranges[k].1 {
                    break;
                }
                ix[k] = ranges[k].0;
            }
        }
    }

    /// Pointwise conjunction with a predicate.
    pub fn filter(&self, mut keep: impl FnMut(&[f64]) -> bool) -> GridSet {
        let mut p = vec![0.0; self.dim()];
        let mask = (0..self.len())
            .map(|i| {
                if !self.mask[i] {
                    return false;
                }
                self.point_into(i, &mut p);
                keep(&p)
            })
            .collect();
        GridSet { axes: self.axes.clone(), mask }
    }

    /// Pointwise conjunction of two masks over identical axes.
    pub fn and(&self, other: &GridSet) -> Result<GridSet> {
        if !self.same_axes(other) {
            return Err(Error::Unsupported("grid masks over different axes".into()));
        }
        let mask = self.mask.iter().zip(&other.mask).map(|(a, b)| *a && *b).collect();
        Ok(GridSet { axes: self.axes.clone(), mask })
    }

    /// Fraction of grid points marked.
    pub fn volume_fraction(&self) -> f64 {
        if self.mask.is_empty() {
            0.0
        } else {
            self.count() as f64 / self.len() as f64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rle_round_trip() {
        let m = vec![false, false, true, true, true, false];
        assert_eq!(rle_encode(&m), vec![(false, 2), (true, 3), (false, 1)]);
        assert_eq!(rle_decode(&rle_encode(&m)), m);
    }

    #[test]
    fn flat_index_matches_point() {
        let g = GridSet::full(vec![vec![0.0, 1.0], vec![0.0, 0.5, 1.0]]).unwrap();
        assert_eq!(g.point(g.flat_index(&[1, 2])), vec![1.0, 1.0]);
        assert_eq!(g.point(4), vec![1.0, 0.5]);
    }

    #[test]
    fn nearest_cell_membership() {
        let g = GridSet::new(vec![vec![0.0, 1.0, 2.0]], vec![false, true, false]).unwrap();
        assert!(g.contains(&[1.2]));
        assert!(!g.contains(&[1.7]));
        assert!(!g.contains(&[5.0]));
    }

    #[test]
    fn axis_by_step_includes_endpoint() {
        let ax = axis_by_step(0.0, 1.0, 0.05);
        assert_eq!(ax.len(), 21);
        assert!((ax[20] - 1.0).abs() < 1e-12);
    }
}

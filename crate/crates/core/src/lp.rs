//! A small dense two-phase simplex solver over `f64` or exact rationals.
//!
//! Problems have the standard form `minimize c·x` subject to `A x = b`,
//! `x >= 0`. Inequality rows are turned into equalities with slack columns.
//! Dantzig pricing is used first and the solver falls back to Bland's rule
//! after a fixed number of pivots, which guarantees termination.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, Zero};

/// Scalar field the solver runs over.
pub trait LpNum:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Magnitudes at or below this are treated as zero in pivoting.
    fn pivot_eps() -> Self;
    /// Phase-one objective values at or below this count as feasible.
    fn feas_eps() -> Self;
    /// Conversion from a float (exact for rationals).
    fn from_f64(v: f64) -> Self;
    /// Conversion to a float.
    fn to_f64(&self) -> f64;
}

impl LpNum for f64 {
    fn pivot_eps() -> Self {
        1e-11
    }
    fn feas_eps() -> Self {
        1e-9
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl LpNum for BigRational {
    fn pivot_eps() -> Self {
        BigRational::zero()
    }
    fn feas_eps() -> Self {
        BigRational::zero()
    }
    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("finite float")
    }
    fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Exact rational from a ratio of integers.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact rational from a float, or from an integer.
pub fn rational_from_i64(v: i64) -> BigRational {
    BigRational::from_i64(v).expect("integer")
}

/// Result of an optimization.
#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<T> {
    Infeasible,
    Unbounded,
    Optimal { value: T, x: Vec<T> },
}

/// A linear program in standard equality form.
#[derive(Debug, Clone)]
pub struct LinearProgram<T> {
    n: usize,
    rows: Vec<(Vec<T>, T)>,
}

impl<T: LpNum> LinearProgram<T> {
    /// A program with `n` nonnegative variables and no constraints.
    pub fn new(n: usize) -> Self {
        LinearProgram { n, rows: Vec::new() }
    }

    /// Number of columns, including slacks added so far.
    pub fn num_vars(&self) -> usize {
        self.n
    }

    /// Adds `a·x = b`.
    pub fn add_eq(&mut self, a: Vec<T>, b: T) {
        assert!(a.len() <= self.n, "row longer than the variable count");
        self.rows.push((a, b));
    }

    /// Adds `a·x <= b` through a new slack column; returns the slack index.
    pub fn add_le(&mut self, a: Vec<T>, b: T) -> usize {
        let s = self.n;
        self.n += 1;
        let mut a = a;
        a.resize(self.n, T::zero());
        a[s] = T::one();
        self.rows.push((a, b));
        s
    }

    /// Phase one only: is the constraint set nonempty?
    pub fn is_feasible(&self) -> bool {
        Tableau::phase_one(self).is_some()
    }

    /// Minimizes `c·x`.
    pub fn minimize(&self, c: &[T]) -> LpOutcome<T> {
        match Tableau::phase_one(self) {
            None => LpOutcome::Infeasible,
            Some(mut t) => t.optimize(c),
        }
    }

    /// Minimum and maximum of `c·x`, sharing one phase-one solve.
    pub fn min_max(&self, c: &[T]) -> Option<(LpOutcome<T>, LpOutcome<T>)> {
        let base = Tableau::phase_one(self)?;
        let mut lo = base.clone();
        let min = lo.optimize(c);
        let neg: Vec<T> = c.iter().map(|v| -v.clone()).collect();
        let mut hi = lo;
        let max = match hi.optimize(&neg) {
            LpOutcome::Optimal { value, x } => LpOutcome::Optimal { value: -value, x },
            other => other,
        };
        Some((min, max))
    }
}

#[derive(Clone)]
struct Tableau<T> {
    /// Constraint rows: `n` structural columns followed by the right-hand side.
    a: Vec<Vec<T>>,
    basis: Vec<usize>,
    n: usize,
}

const BLAND_AFTER: usize = 200;

impl<T: LpNum> Tableau<T> {
    /// Runs phase one; returns a feasible basis over structural columns only.
    fn phase_one(lp: &LinearProgram<T>) -> Option<Tableau<T>> {
        let n = lp.n;
        let m = lp.rows.len();
        let width = n + m + 1;
        let mut a: Vec<Vec<T>> = Vec::with_capacity(m);
        for (i, (row, b)) in lp.rows.iter().enumerate() {
            let mut r = vec![T::zero(); width];
            for (j, v) in row.iter().enumerate() {
                r[j] = v.clone();
            }
            r[n + i] = T::one();
            r[width - 1] = b.clone();
            if *b < T::zero() {
                for (j, v) in r.iter_mut().enumerate() {
                    if j != n + i {
                        *v = -v.clone();
                    }
                }
            }
            a.push(r);
        }
        let basis: Vec<usize> = (n..n + m).collect();
        let mut t = Tableau { a, basis, n: n + m };
        let mut cost = vec![T::zero(); n + m];
        for c in cost.iter_mut().skip(n) {
            *c = T::one();
        }
        let (value, bounded) = t.run(&cost, n + m);
        debug_assert!(bounded);
        if value > T::feas_eps() {
            return None;
        }
        // Drive artificial columns out of the basis; drop redundant rows.
        let mut keep = Vec::with_capacity(m);
        for i in 0..m {
            if t.basis[i] >= n {
                let pivot_col = (0..n).find(|&j| abs(&t.a[i][j]) > T::pivot_eps());
                match pivot_col {
                    Some(j) => {
                        t.pivot(i, j);
                        keep.push(true);
                    }
                    None => keep.push(false),
                }
            } else {
                keep.push(true);
            }
        }
        let mut rows = Vec::new();
        let mut basis = Vec::new();
        for (i, k) in keep.into_iter().enumerate() {
            if k {
                let mut r = t.a[i][..n].to_vec();
                r.push(t.a[i][width - 1].clone());
                rows.push(r);
                basis.push(t.basis[i]);
            }
        }
        Some(Tableau { a: rows, basis, n })
    }

    fn rhs(&self, i: usize) -> &T {
        &self.a[i][self.n]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.a[r][c].clone();
        for v in self.a[r].iter_mut() {
            *v = v.clone() / p.clone();
        }
        let pivot_row = self.a[r].clone();
        for i in 0..self.a.len() {
            if i == r {
                continue;
            }
            let f = self.a[i][c].clone();
            if f.is_zero() {
                continue;
            }
            for (v, pr) in self.a[i].iter_mut().zip(&pivot_row) {
                if !pr.is_zero() {
                    *v = v.clone() - f.clone() * pr.clone();
                }
            }
            self.a[i][c] = T::zero();
        }
        self.basis[r] = c;
    }

    /// Simplex iterations on columns `< limit`. Returns `(objective, bounded)`.
    fn run(&mut self, cost: &[T], limit: usize) -> (T, bool) {
        let m = self.a.len();
        let mut iter = 0usize;
        loop {
            // Reduced costs d_j = c_j - c_B · B^{-1} a_j.
            let mut best: Option<(usize, T)> = None;
            for j in 0..limit {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut d = cost[j].clone();
                for i in 0..m {
                    let cb = &cost[self.basis[i]];
                    if !cb.is_zero() && !self.a[i][j].is_zero() {
                        d = d - cb.clone() * self.a[i][j].clone();
                    }
                }
                if d < -T::pivot_eps() {
                    let better = match &best {
                        None => true,
                        Some((_, bd)) => iter < BLAND_AFTER && d < *bd,
                    };
                    if better {
                        best = Some((j, d));
                    }
                    if iter >= BLAND_AFTER {
                        break;
                    }
                }
            }
            let Some((col, _)) = best else {
                let mut z = T::zero();
                for i in 0..m {
                    z = z + cost[self.basis[i]].clone() * self.rhs(i).clone();
                }
                return (z, true);
            };
            let mut leave: Option<(usize, T)> = None;
            for i in 0..m {
                let v = &self.a[i][col];
                if *v > T::pivot_eps() {
                    let ratio = self.rhs(i).clone() / v.clone();
                    let take = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                    };
                    if take {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((row, _)) = leave else {
                return (T::zero(), false);
            };
            self.pivot(row, col);
            iter += 1;
        }
    }

    fn optimize(&mut self, c: &[T]) -> LpOutcome<T> {
        let mut cost = c.to_vec();
        cost.resize(self.n, T::zero());
        let (value, bounded) = self.run(&cost, self.n);
        if !bounded {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![T::zero(); self.n];
        for (i, &b) in self.basis.iter().enumerate() {
            x[b] = self.rhs(i).clone();
        }
        LpOutcome::Optimal { value, x }
    }
}

fn abs<T: LpNum>(v: &T) -> T {
    if *v < T::zero() {
        -v.clone()
    } else {
        v.clone()
    }
}

/// Absolute value helper for rationals (re-exported for callers of the exact mode).
pub fn rational_abs(v: &BigRational) -> BigRational {
    v.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_min() {
        // minimize -x - y  s.t. x + 2y <= 4, 3x + y <= 6
        let mut lp = LinearProgram::<f64>::new(2);
        lp.add_le(vec![1.0, 2.0], 4.0);
        lp.add_le(vec![3.0, 1.0], 6.0);
        match lp.minimize(&[-1.0, -1.0]) {
            LpOutcome::Optimal { value, .. } => assert!((value + 2.8).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_detected() {
        let mut lp = LinearProgram::<f64>::new(1);
        lp.add_eq(vec![1.0], 1.0);
        lp.add_eq(vec![1.0], 2.0);
        assert!(!lp.is_feasible());
    }

    #[test]
    fn unbounded_detected() {
        let mut lp = LinearProgram::<f64>::new(2);
        lp.add_eq(vec![1.0, -1.0], 0.0);
        assert_eq!(lp.minimize(&[-1.0, 0.0]), LpOutcome::Unbounded);
    }

    #[test]
    fn exact_rational_mode() {
        // x + y = 1, x - y = 1/3 -> x = 2/3
        let mut lp = LinearProgram::<BigRational>::new(2);
        lp.add_eq(vec![ratio(1, 1), ratio(1, 1)], ratio(1, 1));
        lp.add_eq(vec![ratio(1, 1), ratio(-1, 1)], ratio(1, 3));
        match lp.minimize(&[ratio(1, 1), ratio(0, 1)]) {
            LpOutcome::Optimal { x, .. } => assert_eq!(x[0], ratio(2, 3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let mut lp = LinearProgram::<f64>::new(2);
        lp.add_eq(vec![1.0, 1.0], 1.0);
        lp.add_eq(vec![2.0, 2.0], 2.0);
        let (min, max) = lp.min_max(&[1.0, 0.0]).unwrap();
        match (min, max) {
            (LpOutcome::Optimal { value: a, .. }, LpOutcome::Optimal { value: b, .. }) => {
                assert!(a.abs() < 1e-12 && (b - 1.0).abs() < 1e-12)
            }
            other => panic!("{other:?}"),
        }
    }
}

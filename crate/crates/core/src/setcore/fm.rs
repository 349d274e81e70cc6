//! Fourier–Motzkin elimination with strict-inequality tracking.
//!
//! Rows encode `coeffs · x <= rhs` (or `<` when `strict`). Eliminating a
//! variable combines every row with a positive coefficient with every row
//! with a negative one; a combined row is strict when either parent is.
//! The last remaining variable is resolved directly from its bounds, which
//! keeps the final step linear in the number of rows.

use std::collections::BTreeMap;

use super::interval::Interval1D;
use super::polytope::HalfSpace;
use super::TOL;
use crate::error::{Error, Result};

/// Rows beyond this count abort elimination instead of exhausting memory.
const ROW_LIMIT: usize = 4_000_000;

/// Relative magnitude under which a normalized coefficient is treated as zero.
const COEFF_EPS: f64 = 1e-13;

#[derive(Debug, Clone)]
struct Row {
    a: Vec<f64>,
    b: f64,
    strict: bool,
}

enum Prepared {
    Infeasible,
    Rows(Vec<Row>),
}

/// Normalizes a row so its largest coefficient has magnitude one.
/// Returns `None` for rows that reduce to a constant comparison.
fn normalize(mut a: Vec<f64>, b: f64) -> (Option<Vec<f64>>, f64) {
    let scale = a.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return (None, b);
    }
    for c in a.iter_mut() {
        *c /= scale;
        if c.abs() < COEFF_EPS {
            *c = 0.0;
        }
    }
    (Some(a), b / scale)
}

/// A constant row `0 <= b` (or `0 < b`) is violated.
fn constant_violated(b: f64, strict: bool) -> bool {
    if strict {
        b <= TOL
    } else {
        b < -TOL
    }
}

fn prepare(dim: usize, rows: &[HalfSpace]) -> Result<Prepared> {
    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        if r.coeffs.len() != dim {
            return Err(Error::Dimension { expected: dim, found: r.coeffs.len() });
        }
        if r.rhs.is_nan() || r.coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Numerical { residual: f64::NAN });
        }
        if r.rhs == f64::INFINITY {
            continue;
        }
        if r.rhs == f64::NEG_INFINITY {
            return Ok(Prepared::Infeasible);
        }
        match normalize(r.coeffs.clone(), r.rhs) {
            (None, b) => {
                if constant_violated(b, r.strict) {
                    return Ok(Prepared::Infeasible);
                }
            }
            (Some(a), b) => out.push(Row { a, b, strict: r.strict }),
        }
    }
    Ok(Prepared::Rows(out))
}

/// Keeps the tightest row per coefficient direction; deterministic order.
fn dedup(rows: Vec<Row>) -> Vec<Row> {
    let mut map: BTreeMap<Vec<i64>, Row> = BTreeMap::new();
    for r in rows {
        let key: Vec<i64> = r.a.iter().map(|c| (c * 1e11).round() as i64).collect();
        match map.get_mut(&key) {
            Some(existing) => {
                if r.b < existing.b - TOL || ((r.b - existing.b).abs() <= TOL && r.strict && !existing.strict) {
                    *existing = r;
                }
            }
            None => {
                map.insert(key, r);
            }
        }
    }
    map.into_values().collect()
}

/// Eliminates variable `j`. Returns `None` when a constant row is violated.
fn eliminate(rows: Vec<Row>, j: usize) -> Result<Option<Vec<Row>>> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut out = Vec::new();
    for r in rows {
        if r.a[j] > 0.0 {
            pos.push(r);
        } else if r.a[j] < 0.0 {
            neg.push(r);
        } else {
            out.push(r);
        }
    }
    if pos.len().saturating_mul(neg.len()) + out.len() > ROW_LIMIT {
        return Err(Error::Numerical { residual: (pos.len() * neg.len()) as f64 });
    }
    for p in &pos {
        for n in &neg {
            let sp = 1.0 / p.a[j];
            let sn = 1.0 / (-n.a[j]);
            let a: Vec<f64> =
                p.a.iter()
                    .zip(&n.a)
                    .enumerate()
                    .map(|(k, (x, y))| if k == j { 0.0 } else { x * sp + y * sn })
                    .collect();
            let b = p.b * sp + n.b * sn;
            if !b.is_finite() || a.iter().any(|c| !c.is_finite()) {
                return Err(Error::Numerical { residual: b });
            }
            let strict = p.strict || n.strict;
            match normalize(a, b) {
                (None, b) => {
                    if constant_violated(b, strict) {
                        return Ok(None);
                    }
                }
                (Some(a), b) => out.push(Row { a, b, strict }),
            }
        }
    }
    Ok(Some(dedup(out)))
}

/// Projects `{x : rows}` onto coordinate `axis`, returning the exact interval
/// (with open endpoints where the binding constraints are strict).
pub fn project_axis(dim: usize, rows: &[HalfSpace], axis: usize) -> Result<Interval1D> {
    if axis >= dim {
        return Err(Error::Dimension { expected: dim, found: axis + 1 });
    }
    let mut rows = match prepare(dim, rows)? {
        Prepared::Infeasible => return Ok(Interval1D::empty()),
        Prepared::Rows(r) => dedup(r),
    };
    let mut remaining: Vec<usize> = (0..dim).filter(|&k| k != axis).collect();
    while !remaining.is_empty() {
        let (pick, _) = remaining
            .iter()
            .enumerate()
            .map(|(idx, &k)| {
                let p = rows.iter().filter(|r| r.a[k] > 0.0).count();
                let n = rows.iter().filter(|r| r.a[k] < 0.0).count();
                (idx, p * n)
            })
            .min_by_key(|&(_, cost)| cost)
            .expect("nonempty");
        let var = remaining.remove(pick);
        rows = match eliminate(rows, var)? {
            None => return Ok(Interval1D::empty()),
            Some(r) => r,
        };
    }
    let mut lo = f64::NEG_INFINITY;
    let mut lo_open = true;
    let mut hi = f64::INFINITY;
    let mut hi_open = true;
    for r in &rows {
        let c = r.a[axis];
        if c > 0.0 {
            let v = r.b / c;
            if v < hi - TOL || (v <= hi + TOL && r.strict) {
                if v < hi - TOL {
                    hi_open = r.strict;
                } else {
                    hi_open = hi_open || r.strict;
                }
                hi = hi.min(v);
            }
        } else if c < 0.0 {
            let v = r.b / c;
            if v > lo + TOL || (v >= lo - TOL && r.strict) {
                if v > lo + TOL {
                    lo_open = r.strict;
                } else {
                    lo_open = lo_open || r.strict;
                }
                lo = lo.max(v);
            }
        } else if constant_violated(r.b, r.strict) {
            return Ok(Interval1D::empty());
        }
    }
    Ok(Interval1D::new(lo, hi, lo_open, hi_open))
}

/// True iff the system of rows has a solution.
pub fn is_feasible(dim: usize, rows: &[HalfSpace]) -> Result<bool> {
    if dim == 0 {
        return match prepare(0, rows)? {
            Prepared::Infeasible => Ok(false),
            Prepared::Rows(_) => Ok(true),
        };
    }
    Ok(!project_axis(dim, rows, 0)?.is_empty())
}

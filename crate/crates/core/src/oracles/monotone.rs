//! Constructive search over conditional mean sequences for the monotone IV family.

use crate::data::AMIVMoments;
use crate::error::{Error, Result};
use crate::setcore::{axis_by_step, Interval1D};

/// Largest instrument support searched exhaustively.
const MAX_K: usize = 3;

/// Attained range of `θ_d = Σ_t P(t) m_t` per treatment `d` (indexed `[d]`).
///
/// The search runs over sequences `m_t = E[Y_d | Z = t]` with
/// `q̲_dt ≤ m_t ≤ q̄_dt`, nondecreasing up to the cutoff `z_star` (1-based)
/// and constant from there on. `None` drops the monotonicity requirement.
/// Candidate values are the grid `y̲_d, y̲_d + step, ...` together with all
/// the bound values of treatment `d`. A treatment without any admissible
/// sequence gets an empty interval.
pub fn oracle_amiv_bounds(m: &AMIVMoments, z_star: Option<usize>, step: f64) -> Result<[Interval1D; 2]> {
    let k = m.k();
    if k > MAX_K {
        return Err(Error::Budget { size: k, limit: MAX_K });
    }
    if let Some(z) = z_star {
        if !(1..=k).contains(&z) {
            return Err(Error::Invalid(format!("cutoff {z} outside 1..={k}")));
        }
    }
    Ok([0, 1].map(|d| search(m, d, z_star, step)))
}

fn search(m: &AMIVMoments, d: usize, z_star: Option<usize>, step: f64) -> Interval1D {
    let k = m.k();
    let mut values = axis_by_step(m.y_min[d], m.y_max[d], step);
    values.extend(m.q_lower[d].iter().chain(&m.q_upper[d]));
    values.sort_by(f64::total_cmp);
    values.dedup();
    let candidates: Vec<Vec<f64>> = (0..k)
        .map(|t| values.iter().copied().filter(|v| m.q_lower[d][t] <= *v && *v <= m.q_upper[d][t]).collect())
        .collect();
    let mut best = (f64::INFINITY, f64::NEG_INFINITY);
    let mut seq = vec![0.0; k];
    walk(m, &candidates, z_star, 0, &mut seq, &mut best);
    if best.0 > best.1 {
        Interval1D::empty()
    } else {
        Interval1D::closed(best.0, best.1)
    }
}

fn walk(m: &AMIVMoments, cand: &[Vec<f64>], z_star: Option<usize>, t: usize, seq: &mut [f64], best: &mut (f64, f64)) {
    if t == seq.len() {
        let theta: f64 = m.z_weights.iter().zip(seq.iter()).map(|(p, v)| p * v).sum();
        best.0 = best.0.min(theta);
        best.1 = best.1.max(theta);
        return;
    }
    for &v in &cand[t] {
        if let (Some(z), true) = (z_star, t > 0) {
            let prev = seq[t - 1];
            // Positions are 0-based; the cutoff sits at position z - 1.
            let ok = if t < z { prev <= v } else { prev == v };
            if !ok {
                continue;
            }
        }
        seq[t] = v;
        walk(m, cand, z_star, t + 1, seq, best);
    }
}

//! Intersection bounds `E[Y̲|Z] ≤ θ ≤ E[Ȳ|Z]` with a discrete instrument.
//!
//! Covers the sharp bounds, outer sets implied by finitely many
//! unconditional moments `E[h(Z)(θ - Y̲)] ≥ 0`, `E[h(Z)(Ȳ - θ)] ≥ 0`, the
//! two-column instrument that point-identifies any value between the
//! crossed bounds, and the misspecification-robust bound. Adapters build
//! the conditional moments from micro data for the discrete-treatment and
//! Lipschitz potential-outcome constructions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::data::{BoundsMoments, Instrument};
use crate::error::{Error, Result};
use crate::lattice::AssumptionFamily;
use crate::setcore::{IdentifiedSet, Interval1D, TOL};

/// `γ̲ = max_z E[Y̲|Z=z]`, `γ̄ = min_z E[Ȳ|Z=z]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SharpBounds {
    pub gamma_lower: f64,
    pub gamma_upper: f64,
    pub refuted: bool,
}

impl SharpBounds {
    /// The sharp identified set `[γ̲, γ̄]` (empty when refuted).
    pub fn identified_set(&self) -> Interval1D {
        Interval1D::closed(self.gamma_lower, self.gamma_upper)
    }
}

/// Sharp bounds from the conditional means.
pub fn sharp_bounds(m: &BoundsMoments) -> SharpBounds {
    let gamma_lower = m.lower_mean.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let gamma_upper = m.upper_mean.iter().copied().fold(f64::INFINITY, f64::min);
    SharpBounds { gamma_lower, gamma_upper, refuted: gamma_lower > gamma_upper }
}

/// `E[h(Z) Y̲] / E[h(Z)]` and `E[h(Z) Ȳ] / E[h(Z)]` for one column.
pub fn column_ratios(m: &BoundsMoments, h: &[f64]) -> (f64, f64) {
    let mut mass = 0.0;
    let mut lo = 0.0;
    let mut hi = 0.0;
    for (z, hz) in h.iter().enumerate().take(m.len()) {
        let w = m.weights[z] * hz;
        mass += w;
        lo += w * m.lower_mean[z];
        hi += w * m.upper_mean[z];
    }
    (lo / mass, hi / mass)
}

/// The outer set `Θ̃(h)`: per-column intervals intersected.
pub fn outer_set(m: &BoundsMoments, h: &Instrument) -> Result<Interval1D> {
    h.validate(m)?;
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for c in &h.columns {
        let (l, u) = column_ratios(m, c);
        lo = lo.max(l);
        hi = hi.min(u);
    }
    // Ratios that should coincide can cross by a few ulps; treat that as a point.
    if lo > hi && lo - hi <= TOL * (1.0 + lo.abs().max(hi.abs())) {
        let mid = 0.5 * (lo + hi);
        return Ok(Interval1D::point(mid));
    }
    Ok(Interval1D::closed(lo, hi))
}

/// Whether some support point with positive weight satisfies `pred`.
fn has_mass(m: &BoundsMoments, pred: impl Fn(usize) -> bool) -> bool {
    (0..m.len()).any(|z| m.weights[z] > 0.0 && pred(z))
}

/// The two probability-mass conditions deciding the MRB endpoints:
/// `P(E[Y̲|Z] ≤ γ̄) > 0` and `P(E[Ȳ|Z] ≥ γ̲) > 0`.
pub fn mrb_mass_conditions(m: &BoundsMoments) -> (bool, bool) {
    let sb = sharp_bounds(m);
    (has_mass(m, |z| m.lower_mean[z] <= sb.gamma_upper + TOL), has_mass(m, |z| m.upper_mean[z] >= sb.gamma_lower - TOL))
}

/// The five-case misspecification-robust bound given the sharp bounds and the mass conditions.
///
/// When `γ̲ ≤ γ̄` this is `[γ̲, γ̄]`. Otherwise it is the crossed interval
/// between `γ̄` and `γ̲`, closed at `γ̄` iff `lower_mass` holds and closed at
/// `γ̲` iff `upper_mass` holds.
pub fn five_case_mrb(gamma_lower: f64, gamma_upper: f64, lower_mass: bool, upper_mass: bool) -> Interval1D {
    if gamma_lower <= gamma_upper {
        Interval1D::closed(gamma_lower, gamma_upper)
    } else {
        Interval1D::new(gamma_upper, gamma_lower, !lower_mass, !upper_mass)
    }
}

/// The misspecification-robust bound of the intersection-bounds model.
pub fn mrb_intersection(m: &BoundsMoments) -> Interval1D {
    let sb = sharp_bounds(m);
    let (lower_mass, upper_mass) = mrb_mass_conditions(m);
    five_case_mrb(sb.gamma_lower, sb.gamma_upper, lower_mass, upper_mass)
}

/// The interval `W` of values a two-column instrument can point-identify in a refuted model.
///
/// Closed at `γ̄` iff `P(E[Ȳ|Z] = γ̄) > 0` and at `γ̲` iff `P(E[Y̲|Z] = γ̲) > 0`.
pub fn w_interval(m: &BoundsMoments) -> Result<Interval1D> {
    let sb = sharp_bounds(m);
    if !sb.refuted {
        return Err(Error::Domain(format!(
            "the model is not refuted (γ̲ = {} ≤ γ̄ = {})",
            sb.gamma_lower, sb.gamma_upper
        )));
    }
    let at_upper = has_mass(m, |z| (m.upper_mean[z] - sb.gamma_upper).abs() <= TOL);
    let at_lower = has_mass(m, |z| (m.lower_mean[z] - sb.gamma_lower).abs() <= TOL);
    Ok(Interval1D::new(sb.gamma_upper, sb.gamma_lower, !at_upper, !at_lower))
}

/// Normalized indicator `1{z ∈ S} / P(Z ∈ S)` and the weighted mean of `v` over `S`.
fn normalized_indicator(m: &BoundsMoments, v: &[f64], inside: impl Fn(f64) -> bool) -> (Vec<f64>, f64) {
    let mass: f64 = (0..m.len()).filter(|&z| inside(v[z])).map(|z| m.weights[z]).sum();
    let h: Vec<f64> = (0..m.len()).map(|z| if inside(v[z]) { 1.0 / mass } else { 0.0 }).collect();
    let mean = (0..m.len()).map(|z| m.weights[z] * h[z] * v[z]).sum();
    (h, mean)
}

/// Smallest and largest value of `v` over support points with positive weight.
fn support_range(m: &BoundsMoments, v: &[f64]) -> (f64, f64) {
    (0..m.len())
        .filter(|&z| m.weights[z] > 0.0)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), z| (lo.min(v[z]), hi.max(v[z])))
}

/// Column `h` with `E[h(Z)] = 1` and `E[h(Z) V] = θ`, mixing the normalized indicators of `{V ≤ θ}` and `{V ≥ θ}`.
fn moment_matching_column(m: &BoundsMoments, v: &[f64], theta: f64) -> Vec<f64> {
    // `θ` may sit an ulp outside the support range of `v`; both indicator sets must carry mass.
    let (vmin, vmax) = support_range(m, v);
    let theta = theta.clamp(vmin, vmax);
    let (h_minus, a) = normalized_indicator(m, v, |x| x <= theta);
    let (h_plus, b) = normalized_indicator(m, v, |x| x >= theta);
    // `a ≤ θ ≤ b` up to rounding; clamping keeps both mixture weights nonnegative.
    let q = if (b - a).abs() <= TOL { 0.0 } else { ((b - theta) / (b - a)).clamp(0.0, 1.0) };
    h_minus.iter().zip(&h_plus).map(|(lo, hi)| q * lo + (1.0 - q) * hi).collect()
}

/// Two-column instrument whose outer set is exactly `{θ}`.
///
/// The first column matches `E[h_1(Z) Y̲] = θ` and the second
/// `E[h_2(Z) Ȳ] = θ`, both with unit mass.
pub fn construct_pointid_instrument(m: &BoundsMoments, theta: f64) -> Result<Instrument> {
    let w = w_interval(m)?;
    if !w.contains(theta) {
        let sb = sharp_bounds(m);
        let reason = if theta < sb.gamma_upper || (theta <= sb.gamma_upper && w.lo_open) {
            format!("θ = {theta} is below the lower endpoint γ̄ = {} of W", sb.gamma_upper)
        } else {
            format!("θ = {theta} is above the upper endpoint γ̲ = {} of W", sb.gamma_lower)
        };
        return Err(Error::Domain(reason));
    }
    let h1 = moment_matching_column(m, &m.lower_mean, theta);
    let h2 = moment_matching_column(m, &m.upper_mean, theta);
    Ok(Instrument { columns: vec![h1, h2] })
}

/// A finite family of single-column moment restrictions, one assumption per instrument.
///
/// In a refuted model the instruments mix the support point attaining
/// `γ̲` with the one attaining `γ̄` at weights `i / resolution`; otherwise
/// they are the indicators of every support point. The family's MRB
/// approximates the model's MRB as the resolution grows.
pub fn instrument_family(m: &BoundsMoments, resolution: usize) -> Result<(AssumptionFamily, Vec<Vec<f64>>)> {
    let sb = sharp_bounds(m);
    let k = m.len();
    let columns: Vec<Vec<f64>> = if sb.refuted {
        if resolution == 0 {
            return Err(Error::Invalid("resolution must be positive".into()));
        }
        let zl = argmax(&m.lower_mean);
        let zu = argmin(&m.upper_mean);
        (0..=resolution)
            .map(|i| {
                let w = i as f64 / resolution as f64;
                let mut c = vec![0.0; k];
                c[zl] += w / m.weights[zl];
                c[zu] += (1.0 - w) / m.weights[zu];
                c
            })
            .collect()
    } else {
        (0..k).map(|z| Instrument::indicator(k, z)).collect()
    };
    let ids = (1..=columns.len()).map(|i| format!("h{i}")).collect();
    let atoms = columns
        .iter()
        .map(|c| {
            let (l, u) = column_ratios(m, c);
            IdentifiedSet::from(Interval1D::closed(l, u))
        })
        .collect();
    Ok((AssumptionFamily::intersection(ids, atoms, IdentifiedSet::whole(1))?, columns))
}

fn argmax(v: &[f64]) -> usize {
    (0..v.len()).fold(0, |b, i| if v[i] > v[b] { i } else { b })
}

fn argmin(v: &[f64]) -> usize {
    (0..v.len()).fold(0, |b, i| if v[i] < v[b] { i } else { b })
}

/// Groups `(value_lower, value_upper, z)` rows into conditional means per `z` (labels in sorted order).
fn aggregate(rows: impl Iterator<Item = (f64, f64, String)>, min_count: usize) -> Result<BoundsMoments> {
    let mut cells: BTreeMap<String, (usize, f64, f64)> = BTreeMap::new();
    let mut n = 0usize;
    for (lo, hi, z) in rows {
        let c = cells.entry(z).or_insert((0, 0.0, 0.0));
        c.0 += 1;
        c.1 += lo;
        c.2 += hi;
        n += 1;
    }
    if n == 0 {
        return Err(Error::Invalid("no observations".into()));
    }
    let mut labels = Vec::new();
    let mut weights = Vec::new();
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for (label, (count, sl, su)) in cells {
        if count < min_count.max(1) {
            return Err(Error::Cell { label, count, min: min_count.max(1) });
        }
        weights.push(count as f64 / n as f64);
        lower.push(sl / count as f64);
        upper.push(su / count as f64);
        labels.push(label);
    }
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    BoundsMoments::new(labels, weights, lower, upper)
}

/// Discrete-treatment bounds for `θ = E[Y_k]`.
///
/// Rows are `(y, x, z)`. With support `[y_min, y_max]` for `Y_k`, the
/// bounds are `Y̲_k = Y 1(X = x_k) + y_min 1(X ≠ x_k)` and
/// `Ȳ_k = Y 1(X = x_k) + y_max 1(X ≠ x_k)`.
pub fn discrete_treatment_moments(
    rows: &[(f64, String, String)],
    target: &str,
    y_min: f64,
    y_max: f64,
    min_count: usize,
) -> Result<BoundsMoments> {
    if !(y_min <= y_max) {
        return Err(Error::Invalid("y_min must not exceed y_max".into()));
    }
    for (y, x, _) in rows {
        if x == target && !(y_min <= *y && *y <= y_max) {
            return Err(Error::Invalid(format!("outcome {y} outside the declared support [{y_min}, {y_max}]")));
        }
    }
    aggregate(
        rows.iter().map(|(y, x, z)| if x == target { (*y, *y, z.clone()) } else { (y_min, y_max, z.clone()) }),
        min_count,
    )
}

/// Lipschitz bounds for `θ_x = E[Y(x)]`: `Y̲ = Y - |X - x| τ`, `Ȳ = Y + |X - x| τ`.
///
/// Rows are `(y, x, z)` with scalar treatment.
pub fn lipschitz_moments(rows: &[(f64, f64, String)], x0: f64, tau: f64, min_count: usize) -> Result<BoundsMoments> {
    if !(tau >= 0.0) {
        return Err(Error::Invalid("the Lipschitz constant must be nonnegative".into()));
    }
    aggregate(
        rows.iter().map(|(y, x, z)| {
            let r = (x - x0).abs() * tau;
            (y - r, y + r, z.clone())
        }),
        min_count,
    )
}

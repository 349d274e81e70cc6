//! Observable inputs shared by the models and the oracles.
//!
//! Every type validates on construction (and on deserialization), so the
//! model and oracle code can assume well-formed moments.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for probability vectors summing to one.
pub const SUM_TOL: f64 = 1e-12;

fn check_weights(w: &[f64], what: &str) -> Result<()> {
    if w.is_empty() {
        return Err(Error::Invalid(format!("{what}: no support points")));
    }
    if w.iter().any(|&p| !(p > 0.0) || !p.is_finite()) {
        return Err(Error::Invalid(format!("{what}: weights must be positive and finite")));
    }
    let s: f64 = w.iter().sum();
    if (s - 1.0).abs() > SUM_TOL {
        return Err(Error::Invalid(format!("{what}: weights sum to {s}, not 1")));
    }
    Ok(())
}

/// Conditional means of the observable bounds `Y̲ ≤ Y ≤ Ȳ` at each support point of a discrete `Z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBoundsMoments")]
pub struct BoundsMoments {
    pub z_support: Vec<String>,
    pub weights: Vec<f64>,
    pub lower_mean: Vec<f64>,
    pub upper_mean: Vec<f64>,
}

#[derive(Deserialize)]
struct RawBoundsMoments {
    z_support: Vec<String>,
    weights: Vec<f64>,
    lower_mean: Vec<f64>,
    upper_mean: Vec<f64>,
}

impl TryFrom<RawBoundsMoments> for BoundsMoments {
    type Error = Error;
    fn try_from(r: RawBoundsMoments) -> Result<Self> {
        BoundsMoments::new(r.z_support, r.weights, r.lower_mean, r.upper_mean)
    }
}

impl BoundsMoments {
    /// Validated moments. Rejects `E[Y̲|Z=z] > E[Ȳ|Z=z]` at any support point.
    pub fn new(z_support: Vec<String>, weights: Vec<f64>, lower_mean: Vec<f64>, upper_mean: Vec<f64>) -> Result<Self> {
        let k = z_support.len();
        if weights.len() != k || lower_mean.len() != k || upper_mean.len() != k {
            return Err(Error::Invalid("z_support, weights, lower_mean and upper_mean must have equal length".into()));
        }
        check_weights(&weights, "weights")?;
        for (i, (l, u)) in lower_mean.iter().zip(&upper_mean).enumerate() {
            if !l.is_finite() || !u.is_finite() {
                return Err(Error::Invalid(format!("non-finite mean at z = {}", z_support[i])));
            }
            if *l > *u {
                return Err(Error::Invalid(format!(
                    "lower mean {l} exceeds upper mean {u} at z = {}; the bounds must be ordered at every support point",
                    z_support[i]
                )));
            }
        }
        Ok(BoundsMoments { z_support, weights, lower_mean, upper_mean })
    }

    /// Moments with support labels `1, 2, ...`.
    pub fn unlabeled(weights: Vec<f64>, lower_mean: Vec<f64>, upper_mean: Vec<f64>) -> Result<Self> {
        let labels = (1..=weights.len()).map(|i| i.to_string()).collect();
        BoundsMoments::new(labels, weights, lower_mean, upper_mean)
    }

    /// Moments with equal weights on each support point.
    pub fn equal_weights(lower_mean: Vec<f64>, upper_mean: Vec<f64>) -> Result<Self> {
        let k = lower_mean.len();
        let mut w = vec![1.0 / k as f64; k];
        // Rounding in 1/k can miss the tolerance for some k; the last weight absorbs it.
        if k > 0 {
            let head: f64 = w[..k - 1].iter().sum();
            w[k - 1] = 1.0 - head;
        }
        BoundsMoments::unlabeled(w, lower_mean, upper_mean)
    }

    /// Number of support points.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    /// True when there are no support points (never, after validation).
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Nonnegative instrumental functions `h = (h_1, ..., h_m)` of a discrete `Z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instrument {
    /// One weight vector over the support of `Z` per column.
    pub columns: Vec<Vec<f64>>,
}

impl Instrument {
    /// Indicator of the support point with index `z`.
    pub fn indicator(k: usize, z: usize) -> Vec<f64> {
        let mut v = vec![0.0; k];
        v[z] = 1.0;
        v
    }

    /// Checks shape, nonnegativity and positive mass of every column.
    pub fn validate(&self, m: &BoundsMoments) -> Result<()> {
        if self.columns.is_empty() {
            return Err(Error::Instrument("an instrument needs at least one column".into()));
        }
        for (i, c) in self.columns.iter().enumerate() {
            if c.len() != m.len() {
                return Err(Error::Dimension { expected: m.len(), found: c.len() });
            }
            if c.iter().any(|&v| v < 0.0 || !v.is_finite()) {
                return Err(Error::Instrument(format!("column {i} has a negative or non-finite weight")));
            }
            let mass: f64 = c.iter().zip(&m.weights).map(|(h, p)| h * p).sum();
            if !(mass > 0.0) {
                return Err(Error::Instrument(format!("column {i} has zero mass E[h(Z)]")));
            }
        }
        Ok(())
    }
}

/// Cell probabilities `q_ij(z) = P(Y=i, D=j | Z=z)` of the binary IV model.
///
/// Each arm is stored in the order `[q11, q01, q10, q00]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBinaryIV", into = "RawBinaryIV")]
pub struct BinaryIVData {
    arms: [[f64; 4]; 2],
}

#[derive(Serialize, Deserialize)]
struct RawBinaryIV {
    q: RawArms,
}

#[derive(Serialize, Deserialize)]
struct RawArms {
    z0: [f64; 4],
    z1: [f64; 4],
}

impl TryFrom<RawBinaryIV> for BinaryIVData {
    type Error = Error;
    fn try_from(r: RawBinaryIV) -> Result<Self> {
        BinaryIVData::new(r.q.z0, r.q.z1)
    }
}

impl From<BinaryIVData> for RawBinaryIV {
    fn from(d: BinaryIVData) -> Self {
        RawBinaryIV { q: RawArms { z0: d.arms[0], z1: d.arms[1] } }
    }
}

impl BinaryIVData {
    /// Validated data from the two arms, each `[q11, q01, q10, q00]`.
    pub fn new(z0: [f64; 4], z1: [f64; 4]) -> Result<Self> {
        for (z, arm) in [z0, z1].iter().enumerate() {
            if arm.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
                return Err(Error::Invalid(format!("arm z={z}: probabilities must be nonnegative")));
            }
            let s: f64 = arm.iter().sum();
            if (s - 1.0).abs() > SUM_TOL {
                return Err(Error::Invalid(format!("arm z={z}: probabilities sum to {s}, not 1")));
            }
        }
        Ok(BinaryIVData { arms: [z0, z1] })
    }

    /// `q_ij(z)`.
    pub fn q(&self, i: usize, j: usize, z: usize) -> f64 {
        let slot = match (i, j) {
            (1, 1) => 0,
            (0, 1) => 1,
            (1, 0) => 2,
            (0, 0) => 3,
            _ => panic!("binary indices only"),
        };
        self.arms[z][slot]
    }

    /// The arm `[q11, q01, q10, q00]` for `Z = z`.
    pub fn arm(&self, z: usize) -> [f64; 4] {
        self.arms[z]
    }
}

/// Treatment-specific conditional bounds for the monotone IV family.
///
/// Indices are `[d][t]` with `d ∈ {0, 1}` and `t = 0, ..., k-1` standing for
/// the ordered instrument values `1, ..., k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAMIV")]
pub struct AMIVMoments {
    pub z_weights: Vec<f64>,
    pub q_lower: [Vec<f64>; 2],
    pub q_upper: [Vec<f64>; 2],
    pub y_min: [f64; 2],
    pub y_max: [f64; 2],
}

#[derive(Deserialize)]
struct RawAMIV {
    z_weights: Vec<f64>,
    q_lower: [Vec<f64>; 2],
    q_upper: [Vec<f64>; 2],
    y_min: [f64; 2],
    y_max: [f64; 2],
}

impl TryFrom<RawAMIV> for AMIVMoments {
    type Error = Error;
    fn try_from(r: RawAMIV) -> Result<Self> {
        AMIVMoments::new(r.z_weights, r.q_lower, r.q_upper, r.y_min, r.y_max)
    }
}

impl AMIVMoments {
    /// Validated moments; requires `y̲_d ≤ q̲_dt ≤ q̄_dt ≤ ȳ_d`.
    pub fn new(
        z_weights: Vec<f64>,
        q_lower: [Vec<f64>; 2],
        q_upper: [Vec<f64>; 2],
        y_min: [f64; 2],
        y_max: [f64; 2],
    ) -> Result<Self> {
        check_weights(&z_weights, "z_weights")?;
        let k = z_weights.len();
        for d in 0..2 {
            if q_lower[d].len() != k || q_upper[d].len() != k {
                return Err(Error::Invalid(format!("treatment {d}: expected {k} conditional bounds")));
            }
            if !(y_min[d] <= y_max[d]) {
                return Err(Error::Invalid(format!("treatment {d}: support bounds out of order")));
            }
            for t in 0..k {
                let (l, u) = (q_lower[d][t], q_upper[d][t]);
                let tol = 1e-12;
                if !(y_min[d] - tol <= l && l <= u + tol && u <= y_max[d] + tol) {
                    return Err(Error::Invalid(format!(
                        "treatment {d}, z = {}: need {} <= {l} <= {u} <= {}",
                        t + 1,
                        y_min[d],
                        y_max[d]
                    )));
                }
            }
        }
        Ok(AMIVMoments { z_weights, q_lower, q_upper, y_min, y_max })
    }

    /// Number of instrument values `k`.
    pub fn k(&self) -> usize {
        self.z_weights.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_moments_reject_crossed_bounds() {
        let e = BoundsMoments::equal_weights(vec![0.6, 0.5, 0.5], vec![1.0, 0.9, 0.45]).unwrap_err();
        assert!(matches!(e, Error::Invalid(_)));
    }

    #[test]
    fn bounds_moments_reject_bad_weights() {
        assert!(BoundsMoments::unlabeled(vec![0.5, 0.4], vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(BoundsMoments::unlabeled(vec![1.0, 0.0], vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn binary_iv_json_layout() {
        let d = BinaryIVData::new([0.1, 0.5, 0.2, 0.2], [0.7, 0.1, 0.1, 0.1]).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"{"q":{"z0":[0.1,0.5,0.2,0.2],"z1":[0.7,0.1,0.1,0.1]}}"#);
        assert_eq!(serde_json::from_str::<BinaryIVData>(&s).unwrap(), d);
        assert_eq!(d.q(1, 1, 1), 0.7);
        assert_eq!(d.q(0, 1, 0), 0.5);
    }

    #[test]
    fn amiv_moments_check_support() {
        let ok = AMIVMoments::new(
            vec![0.5, 0.5],
            [vec![0.1, 0.1], vec![0.3, 0.5]],
            [vec![0.9, 0.9], vec![0.45, 0.9]],
            [0.0; 2],
            [1.0; 2],
        );
        assert!(ok.is_ok());
        let bad = AMIVMoments::new(
            vec![0.5, 0.5],
            [vec![0.1, 0.1], vec![0.3, 0.5]],
            [vec![0.9, 0.9], vec![0.45, 1.2]],
            [0.0; 2],
            [1.0; 2],
        );
        assert!(bad.is_err());
    }
}

//! Artstein inequalities for models with a finite outcome support.
//!
//! A model predicts a random set of outcomes whose law depends on
//! covariates `x` and the parameter `θ`; its Choquet capacity is
//! `L(K, x; θ) = P(random set ∩ K ≠ ∅)`. The data are consistent with `θ`
//! on `K` when `P(Y ∈ K | X = x) ≤ L(K, x; θ)`. Checking a pre-selected
//! collection of sets `K` yields an outer set; checking every nonempty `K`
//! yields the sharp set. Parameter sets are evaluated on a user grid.
//!
//! Outcome subsets are bitmasks over the outcome labels.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{find_discordance, AssumptionFamily};
use crate::setcore::{axis_linspace, GridSet, IdentifiedSet};

/// Largest outcome support for which every nonempty subset is checked.
pub const MAX_OUTCOMES: usize = 8;

/// Absolute tolerance for Artstein inequalities with exact capacities.
pub const INEQ_TOL: f64 = 1e-9;

/// A capacity value, with a Monte-Carlo standard error when simulated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacityValue {
    pub value: f64,
    pub se: Option<f64>,
}

impl CapacityValue {
    /// Value used on the right-hand side of an inequality: `L + 3·SE` for simulated capacities.
    pub fn upper_band(&self) -> f64 {
        self.value + 3.0 * self.se.unwrap_or(0.0)
    }
}

/// A Choquet capacity over a finite outcome support.
pub trait Capacity: Send + Sync {
    /// Number of outcomes.
    fn n_outcomes(&self) -> usize;

    /// `L(K, x; θ)` for a nonempty subset `K`.
    fn capacity(&self, k: u32, x: usize, theta: &[f64]) -> Result<CapacityValue>;

    /// `L(K, x; θ)` for every mask `K` (index 0, the empty set, has value 0).
    fn capacity_table(&self, x: usize, theta: &[f64]) -> Result<Vec<CapacityValue>> {
        let n = 1u32 << self.n_outcomes();
        let mut out = vec![CapacityValue { value: 0.0, se: None }];
        for k in 1..n {
            out.push(self.capacity(k, x, theta)?);
        }
        Ok(out)
    }
}

/// One focal set of a random-set law, with probability `intercept + slope · θ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FocalSet {
    /// Outcome mask.
    pub set: u32,
    pub intercept: f64,
    pub slope: Vec<f64>,
}

/// Capacity of a random set whose focal probabilities are affine in `θ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomSetCapacity {
    pub n_outcomes: usize,
    /// One law per covariate value, or a single law shared by all of them.
    pub laws: Vec<Vec<FocalSet>>,
}

impl RandomSetCapacity {
    /// Validates masks and that focal probabilities sum to one for every `θ`.
    pub fn new(n_outcomes: usize, laws: Vec<Vec<FocalSet>>) -> Result<Self> {
        if n_outcomes == 0 || n_outcomes > MAX_OUTCOMES {
            return Err(Error::Budget { size: n_outcomes, limit: MAX_OUTCOMES });
        }
        if laws.is_empty() {
            return Err(Error::Invalid("a random-set capacity needs at least one law".into()));
        }
        let full = (1u32 << n_outcomes) - 1;
        for law in &laws {
            let dim = law.first().map_or(0, |f| f.slope.len());
            let mut icpt = 0.0;
            let mut slope = vec![0.0; dim];
            for f in law {
                if f.set == 0 || f.set & !full != 0 {
                    return Err(Error::Invalid(format!("focal set mask {} is empty or outside the support", f.set)));
                }
                if f.slope.len() != dim {
                    return Err(Error::Dimension { expected: dim, found: f.slope.len() });
                }
                icpt += f.intercept;
                for (s, v) in slope.iter_mut().zip(&f.slope) {
                    *s += v;
                }
            }
            if (icpt - 1.0).abs() > 1e-12 || slope.iter().any(|s| s.abs() > 1e-12) {
                return Err(Error::Invalid("focal probabilities must sum to one for every θ".into()));
            }
        }
        Ok(RandomSetCapacity { n_outcomes, laws })
    }

    /// Focal sets and their probabilities at `(x, θ)`.
    pub fn focal_probabilities(&self, x: usize, theta: &[f64]) -> Result<Vec<(u32, f64)>> {
        let law = if self.laws.len() == 1 {
            &self.laws[0]
        } else {
            self.laws.get(x).ok_or_else(|| Error::Key(format!("x index {x}")))?
        };
        law.iter()
            .map(|f| {
                if f.slope.len() != theta.len() {
                    return Err(Error::Dimension { expected: f.slope.len(), found: theta.len() });
                }
                let p = f.intercept + f.slope.iter().zip(theta).map(|(a, b)| a * b).sum::<f64>();
                if !(-1e-12..=1.0 + 1e-12).contains(&p) {
                    return Err(Error::Parameter(format!("focal probability {p} outside [0, 1] at θ = {theta:?}")));
                }
                Ok((f.set, p.clamp(0.0, 1.0)))
            })
            .collect()
    }
}

impl Capacity for RandomSetCapacity {
    fn n_outcomes(&self) -> usize {
        self.n_outcomes
    }

    fn capacity(&self, k: u32, x: usize, theta: &[f64]) -> Result<CapacityValue> {
        let value = self.focal_probabilities(x, theta)?.iter().filter(|(s, _)| s & k != 0).map(|(_, p)| p).sum();
        Ok(CapacityValue { value, se: None })
    }
}

/// The capacity equal to one on every nonempty set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VacuousCapacity {
    pub n_outcomes: usize,
}

impl Capacity for VacuousCapacity {
    fn n_outcomes(&self) -> usize {
        self.n_outcomes
    }

    fn capacity(&self, k: u32, _x: usize, _theta: &[f64]) -> Result<CapacityValue> {
        Ok(CapacityValue { value: if k == 0 { 0.0 } else { 1.0 }, se: None })
    }
}

/// Parameters of the two-player entry game the grid coordinates may set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryParam {
    Gamma1,
    Gamma2,
    Beta,
    Delta1,
    Delta2,
}

/// Two-player complete-information entry game with payoffs
/// `π_i = γ_i + X_i β - δ_j Y_j + ε_i`, `ε ~ N(0, Σ)`.
///
/// Outcomes are indexed `0: (0,0)`, `1: (1,0)`, `2: (0,1)`, `3: (1,1)`,
/// with bit `i` giving player `i+1`'s entry decision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryGameSpec {
    pub gamma: [f64; 2],
    pub beta: f64,
    pub delta: [f64; 2],
    pub sigma: [[f64; 2]; 2],
    /// Player-specific covariates `(X_1, X_2)` per covariate value.
    pub x_support: Vec<[f64; 2]>,
    pub mc_draws: usize,
    pub seed: u64,
    /// Which parameter each `θ` coordinate overrides.
    #[serde(default = "default_theta_params")]
    pub theta_params: Vec<EntryParam>,
}

fn default_theta_params() -> Vec<EntryParam> {
    vec![EntryParam::Gamma1, EntryParam::Gamma2]
}

/// Outcome labels of the entry game in index order.
pub const ENTRY_OUTCOMES: [&str; 4] = ["00", "10", "01", "11"];

impl EntryGameSpec {
    fn validate(&self) -> Result<[[f64; 2]; 2]> {
        if self.delta.iter().any(|d| !(*d >= 0.0)) {
            return Err(Error::Parameter("interaction effects δ must be nonnegative".into()));
        }
        if self.mc_draws == 0 {
            return Err(Error::Parameter("mc_draws must be positive".into()));
        }
        cholesky2(&self.sigma)
    }

    fn with_theta(&self, theta: &[f64]) -> Result<([f64; 2], f64, [f64; 2])> {
        if theta.len() != self.theta_params.len() {
            return Err(Error::Dimension { expected: self.theta_params.len(), found: theta.len() });
        }
        let (mut g, mut b, mut d) = (self.gamma, self.beta, self.delta);
        for (p, v) in self.theta_params.iter().zip(theta) {
            match p {
                EntryParam::Gamma1 => g[0] = *v,
                EntryParam::Gamma2 => g[1] = *v,
                EntryParam::Beta => b = *v,
                EntryParam::Delta1 => d[0] = *v,
                EntryParam::Delta2 => d[1] = *v,
            }
        }
        if d.iter().any(|x| !(*x >= 0.0)) {
            return Err(Error::Parameter("interaction effects δ must be nonnegative".into()));
        }
        Ok((g, b, d))
    }
}

/// Lower Cholesky factor of a 2×2 covariance; errors unless symmetric positive definite.
fn cholesky2(s: &[[f64; 2]; 2]) -> Result<[[f64; 2]; 2]> {
    if (s[0][1] - s[1][0]).abs() > 1e-12 {
        return Err(Error::Parameter("Σ must be symmetric".into()));
    }
    if !(s[0][0] > 0.0) {
        return Err(Error::Parameter("Σ must be positive definite".into()));
    }
    let l00 = s[0][0].sqrt();
    let l10 = s[1][0] / l00;
    let r = s[1][1] - l10 * l10;
    if !(r > 0.0) {
        return Err(Error::Parameter("Σ must be positive definite".into()));
    }
    Ok([[l00, 0.0], [l10, r.sqrt()]])
}

/// Mask of pure-strategy Nash equilibria for payoff intercepts `u_i = γ_i + X_i β + ε_i`.
///
/// A player enters iff its payoff given the rival's action is nonnegative.
pub fn equilibrium_set(u: [f64; 2], delta: [f64; 2]) -> u32 {
    let mut mask = 0;
    for y in 0..4u32 {
        let y1 = y & 1;
        let y2 = (y >> 1) & 1;
        let p1 = u[0] - delta[1] * y2 as f64;
        let p2 = u[1] - delta[0] * y1 as f64;
        let br1 = (p1 >= 0.0) == (y1 == 1);
        let br2 = (p2 >= 0.0) == (y2 == 1);
        if br1 && br2 {
            mask |= 1 << y;
        }
    }
    mask
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the stream used for cell `(x, θ)`; independent of evaluation order.
fn cell_seed(seed: u64, x: usize, theta: &[f64]) -> u64 {
    let mut h = splitmix64(seed ^ splitmix64(x as u64));
    for v in theta {
        h = splitmix64(h ^ v.to_bits());
    }
    h
}

/// Monte-Carlo capacity of the entry game.
#[derive(Debug, Clone)]
pub struct EntryGameCapacity {
    spec: EntryGameSpec,
    chol: [[f64; 2]; 2],
}

impl EntryGameCapacity {
    /// Validates `Σ` and `δ`.
    pub fn new(spec: EntryGameSpec) -> Result<Self> {
        let chol = spec.validate()?;
        Ok(EntryGameCapacity { spec, chol })
    }

    /// The game specification.
    pub fn spec(&self) -> &EntryGameSpec {
        &self.spec
    }

    /// Counts of each equilibrium-set mask over the draws of cell `(x, θ)`.
    pub fn equilibrium_histogram(&self, x: usize, theta: &[f64]) -> Result<[usize; 16]> {
        let xv = *self.spec.x_support.get(x).ok_or_else(|| Error::Key(format!("x index {x}")))?;
        let (g, b, d) = self.spec.with_theta(theta)?;
        let mut rng = ChaCha8Rng::seed_from_u64(cell_seed(self.spec.seed, x, theta));
        let mut hist = [0usize; 16];
        let l = self.chol;
        for _ in 0..self.spec.mc_draws {
            let z0: f64 = StandardNormal.sample(&mut rng);
            let z1: f64 = StandardNormal.sample(&mut rng);
            let e = [l[0][0] * z0, l[1][0] * z0 + l[1][1] * z1];
            let u = [g[0] + xv[0] * b + e[0], g[1] + xv[1] * b + e[1]];
            hist[equilibrium_set(u, d) as usize] += 1;
        }
        Ok(hist)
    }
}

fn table_from_histogram(hist: &[usize; 16], draws: usize) -> Vec<CapacityValue> {
    (0..16u32)
        .map(|k| {
            if k == 0 {
                return CapacityValue { value: 0.0, se: None };
            }
            let hits: usize = (0..16u32).filter(|m| m & k != 0).map(|m| hist[m as usize]).sum();
            let v = hits as f64 / draws as f64;
            CapacityValue { value: v, se: Some((v * (1.0 - v) / draws as f64).sqrt()) }
        })
        .collect()
}

impl Capacity for EntryGameCapacity {
    fn n_outcomes(&self) -> usize {
        4
    }

    fn capacity(&self, k: u32, x: usize, theta: &[f64]) -> Result<CapacityValue> {
        Ok(self.capacity_table(x, theta)?[k as usize])
    }

    fn capacity_table(&self, x: usize, theta: &[f64]) -> Result<Vec<CapacityValue>> {
        let hist = self.equilibrium_histogram(x, theta)?;
        Ok(table_from_histogram(&hist, self.spec.mc_draws))
    }
}

/// Seeded Monte-Carlo estimate of `L(K, x; θ)` for the entry game.
pub fn entry_game_capacity(spec: &EntryGameSpec, k: u32, x: usize, theta: &[f64]) -> Result<CapacityValue> {
    if k == 0 || k > 15 {
        return Err(Error::Invalid(format!("outcome mask {k} is not a nonempty subset of the four outcomes")));
    }
    EntryGameCapacity::new(spec.clone())?.capacity(k, x, theta)
}

/// Outcome probabilities, a capacity and a parameter grid.
#[derive(Clone)]
pub struct FiniteCapacityModel {
    pub y_labels: Vec<String>,
    pub x_labels: Vec<String>,
    /// `P(Y = y | X = x)` indexed `[x][y]`.
    pub p_y_given_x: Vec<Vec<f64>>,
    pub capacity: Arc<dyn Capacity>,
    pub theta_axes: Vec<Vec<f64>>,
}

impl std::fmt::Debug for FiniteCapacityModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteCapacityModel")
            .field("y_labels", &self.y_labels)
            .field("x_labels", &self.x_labels)
            .field("p_y_given_x", &self.p_y_given_x)
            .field("theta_axes", &self.theta_axes)
            .finish_non_exhaustive()
    }
}

impl FiniteCapacityModel {
    /// Validates shapes and probability tables.
    pub fn new(
        y_labels: Vec<String>,
        x_labels: Vec<String>,
        p_y_given_x: Vec<Vec<f64>>,
        capacity: Arc<dyn Capacity>,
        theta_axes: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let ny = y_labels.len();
        if ny == 0 || ny > MAX_OUTCOMES {
            return Err(Error::Budget { size: ny, limit: MAX_OUTCOMES });
        }
        if capacity.n_outcomes() != ny {
            return Err(Error::Dimension { expected: ny, found: capacity.n_outcomes() });
        }
        if p_y_given_x.len() != x_labels.len() || x_labels.is_empty() {
            return Err(Error::Invalid("one probability row per covariate value is required".into()));
        }
        for (x, row) in p_y_given_x.iter().enumerate() {
            if row.len() != ny {
                return Err(Error::Dimension { expected: ny, found: row.len() });
            }
            if row.iter().any(|p| !(*p >= 0.0)) || (row.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
                return Err(Error::Invalid(format!("P(Y|X={}) must be a probability vector", x_labels[x])));
            }
        }
        GridSet::full(theta_axes.clone())?;
        Ok(FiniteCapacityModel { y_labels, x_labels, p_y_given_x, capacity, theta_axes })
    }

    /// `50` evenly spaced points per dimension between `lo` and `hi`.
    pub fn default_axes(lo: &[f64], hi: &[f64]) -> Vec<Vec<f64>> {
        lo.iter().zip(hi).map(|(a, b)| axis_linspace(*a, *b, 50)).collect()
    }

    /// `P(Y ∈ K | X = x)`.
    pub fn prob(&self, k: u32, x: usize) -> f64 {
        (0..self.y_labels.len()).filter(|y| k & (1 << y) != 0).map(|y| self.p_y_given_x[x][y]).sum()
    }

    /// Mask of all outcomes.
    pub fn full_mask(&self) -> u32 {
        (1u32 << self.y_labels.len()) - 1
    }

    /// Label of an outcome subset, e.g. `{a,b}`.
    pub fn set_label(&self, k: u32) -> String {
        let names: Vec<&str> =
            (0..self.y_labels.len()).filter(|y| k & (1 << y) != 0).map(|y| self.y_labels[y].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Checks `L(𝒴) ≈ 1` and monotonicity in `K` at the grid corners.
    pub fn spot_check(&self) -> Result<()> {
        let probe = GridSet::full(self.theta_axes.clone())?;
        let corners = [0, probe.len() - 1];
        let full = self.full_mask();
        for &c in &corners {
            let theta = probe.point(c);
            for x in 0..self.x_labels.len() {
                let t = self.capacity.capacity_table(x, &theta)?;
                let top = t[full as usize];
                if (top.value - 1.0).abs() > 3.0 * top.se.unwrap_or(0.0) + 1e-9 {
                    return Err(Error::Parameter(format!("L(Y) = {} differs from 1", top.value)));
                }
                for k in 1..=full {
                    for k2 in 1..=full {
                        if k & !k2 == 0 && t[k as usize].value > t[k2 as usize].value + 1e-12 {
                            return Err(Error::Parameter(format!(
                                "capacity not monotone: L({}) > L({})",
                                self.set_label(k),
                                self.set_label(k2)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Which `(K, x)` inequalities hold at each grid point.
#[derive(Debug, Clone)]
pub struct InequalityTable {
    axes: Vec<Vec<f64>>,
    n_sets: usize,
    /// `ok[x * n_sets + (K - 1)][θ index]`.
    ok: Vec<Vec<bool>>,
}

impl InequalityTable {
    /// Evaluates every inequality once per grid point and covariate value.
    pub fn build(model: &FiniteCapacityModel) -> Result<Self> {
        let probe = GridSet::full(model.theta_axes.clone())?;
        let n_sets = model.full_mask() as usize;
        let nx = model.x_labels.len();
        let mut ok = vec![vec![false; probe.len()]; nx * n_sets];
        let mut theta = vec![0.0; probe.dim()];
        #[allow(clippy::needless_range_loop)]
        for idx in 0..probe.len() {
            probe.point_into(idx, &mut theta);
            for x in 0..nx {
                let t = model.capacity.capacity_table(x, &theta)?;
                for k in 1..=n_sets {
                    let lhs = model.prob(k as u32, x);
                    ok[x * n_sets + k - 1][idx] = lhs <= t[k].upper_band() + INEQ_TOL;
                }
            }
        }
        Ok(InequalityTable { axes: model.theta_axes.clone(), n_sets, ok })
    }

    /// Grid of `θ` satisfying the inequality for `K` at covariate `x`.
    pub fn atom(&self, k: u32, x: usize) -> Result<GridSet> {
        GridSet::new(self.axes.clone(), self.ok[x * self.n_sets + k as usize - 1].clone())
    }

    /// Grid of `θ` satisfying the inequalities for every `K` in `collection` at every `x`.
    pub fn outer_set(&self, collection: &[u32]) -> Result<GridSet> {
        let len = self.ok.first().map_or(0, Vec::len);
        let mut mask = vec![true; len];
        let nx = self.ok.len() / self.n_sets;
        for &k in collection {
            if k == 0 || k as usize > self.n_sets {
                return Err(Error::Invalid(format!("outcome mask {k} is not a nonempty subset of the support")));
            }
            for x in 0..nx {
                for (m, v) in mask.iter_mut().zip(&self.ok[x * self.n_sets + k as usize - 1]) {
                    *m &= *v;
                }
            }
        }
        GridSet::new(self.axes.clone(), mask)
    }
}

/// Outer set from a pre-selected collection of outcome subsets (empty collection: the whole grid).
pub fn outer_set_for_collection(model: &FiniteCapacityModel, collection: &[u32]) -> Result<GridSet> {
    InequalityTable::build(model)?.outer_set(collection)
}

/// The sharp set: every nonempty subset of the outcome support.
pub fn sharp_set(model: &FiniteCapacityModel) -> Result<GridSet> {
    let all: Vec<u32> = (1..=model.full_mask()).collect();
    outer_set_for_collection(model, &all)
}

/// Outcome of the two low-level pre-checks for refutation certificates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaPrechecks {
    /// Every outcome has positive probability at every covariate value.
    pub positive_probabilities: bool,
    /// For every outcome `y` some grid point makes `min_x L({y}, x; θ)`
    /// exceed `1 - min_x P(Y = y | X = x)`, so `{y}` alone is satisfiable.
    pub saturating_grid: bool,
}

impl LemmaPrechecks {
    pub fn passed(&self) -> bool {
        self.positive_probabilities && self.saturating_grid
    }
}

/// Evaluates the pre-checks on the model's grid.
pub fn lemma_prechecks(model: &FiniteCapacityModel) -> Result<LemmaPrechecks> {
    let ny = model.y_labels.len();
    let nx = model.x_labels.len();
    let positive_probabilities = model.p_y_given_x.iter().all(|row| row.iter().all(|p| *p > 0.0));
    let probe = GridSet::full(model.theta_axes.clone())?;
    let mut best = vec![f64::NEG_INFINITY; ny];
    let mut theta = vec![0.0; probe.dim()];
    for idx in 0..probe.len() {
        probe.point_into(idx, &mut theta);
        let mut worst = vec![f64::INFINITY; ny];
        for x in 0..nx {
            let t = model.capacity.capacity_table(x, &theta)?;
            for (y, w) in worst.iter_mut().enumerate() {
                *w = w.min(t[1 << y].value);
            }
        }
        for y in 0..ny {
            best[y] = best[y].max(worst[y]);
        }
    }
    let saturating_grid = (0..ny).all(|y| {
        let pmin = (0..nx).map(|x| model.p_y_given_x[x][y]).fold(f64::INFINITY, f64::min);
        best[y] > 1.0 - pmin
    });
    Ok(LemmaPrechecks { positive_probabilities, saturating_grid })
}

/// An inequality `P(Y ∈ K | X = x) ≤ L(K, x; θ)` named by its set and covariate value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetAtX {
    pub set: Vec<String>,
    pub x: String,
}

/// Two collections of inequalities with nonempty, disjoint grid sets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollectionDiscordance {
    pub collection_a: Vec<SetAtX>,
    pub collection_b: Vec<SetAtX>,
    pub set_a: GridSet,
    pub set_b: GridSet,
}

/// Result of the discordance search, with the pre-check diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscordanceSearch {
    pub certificate: Option<CollectionDiscordance>,
    pub prechecks: LemmaPrechecks,
    pub diagnostic: Option<String>,
}

/// Searches for two collections of `(K, x)` inequalities with disjoint nonempty grid sets.
///
/// Every `(K, x)` pair is an assumption of a finite family under the
/// intersection rule. When all pairs exceed the lattice budget only the
/// singleton sets `{y}` are used.
pub fn find_discordant_collections(model: &FiniteCapacityModel) -> Result<DiscordanceSearch> {
    let table = InequalityTable::build(model)?;
    let nx = model.x_labels.len();
    let full = model.full_mask();
    let all: Vec<u32> = (1..=full).collect();
    let singles: Vec<u32> = (0..model.y_labels.len()).map(|y| 1u32 << y).collect();
    let sets = if all.len() * nx <= crate::lattice::MAX_FAMILY { all } else { singles };
    if sets.len() * nx > crate::lattice::MAX_FAMILY {
        return Err(Error::Budget { size: sets.len() * nx, limit: crate::lattice::MAX_FAMILY });
    }
    let mut ids = Vec::new();
    let mut atoms = Vec::new();
    let mut keys = Vec::new();
    for x in 0..nx {
        for &k in &sets {
            ids.push(format!("{}@{}", model.set_label(k), model.x_labels[x]));
            atoms.push(IdentifiedSet::from(table.atom(k, x)?));
            keys.push((k, x));
        }
    }
    let space = IdentifiedSet::from(GridSet::full(model.theta_axes.clone())?);
    let fam = AssumptionFamily::intersection(ids, atoms, space)?;
    let prechecks = lemma_prechecks(model)?;
    let name = |i: usize| {
        let (k, x) = keys[i];
        SetAtX {
            set: (0..model.y_labels.len()).filter(|y| k & (1 << y) != 0).map(|y| model.y_labels[y].clone()).collect(),
            x: model.x_labels[x].clone(),
        }
    };
    let grid = |s: IdentifiedSet| match s {
        IdentifiedSet::Grid(g) => Ok(g),
        _ => Err(Error::Invalid("expected a grid set".into())),
    };
    let certificate = match find_discordance(&fam)? {
        Some(c) => Some(CollectionDiscordance {
            collection_a: c.submodel_a.indices().into_iter().map(name).collect(),
            collection_b: c.submodel_b.indices().into_iter().map(name).collect(),
            set_a: grid(c.set_a)?,
            set_b: grid(c.set_b)?,
        }),
        None => None,
    };
    let diagnostic = if certificate.is_none() {
        let mut notes = Vec::new();
        if !fam.is_consistent(fam.full())? {
            notes.push("the model is refuted on the grid but no discordant pair was found".to_string());
        } else {
            notes.push("the model is not refuted on the grid".to_string());
        }
        if !prechecks.positive_probabilities {
            notes.push("some outcome has zero probability at some covariate value".to_string());
        }
        if !prechecks.saturating_grid {
            notes.push("no grid point drives every singleton capacity close enough to one".to_string());
        }
        Some(notes.join("; "))
    } else {
        None
    };
    Ok(DiscordanceSearch { certificate, prechecks, diagnostic })
}

/// Capacity description used by scenario files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CapacitySpec {
    /// Random set with focal sets given by outcome labels.
    RandomSet { laws: Vec<Vec<LabeledFocalSet>> },
    /// `L(K) = 1` for every nonempty `K`.
    Vacuous,
    /// Simulated two-player entry game.
    EntryGame(EntryGameSpec),
}

/// A focal set written with outcome labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledFocalSet {
    pub set: Vec<String>,
    pub intercept: f64,
    #[serde(default)]
    pub slope: Vec<f64>,
}

/// Grid specification: bounds and number of points per dimension (default 50).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    #[serde(default)]
    pub points: Option<usize>,
}

/// A complete scenario: supports, probabilities, capacity and grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub outcomes: Vec<String>,
    pub covariates: Vec<String>,
    /// `P(Y = y | X = x)` indexed `[x][y]`.
    pub p_y_given_x: Vec<Vec<f64>>,
    pub capacity: CapacitySpec,
    pub grid: GridSpec,
    /// Optional pre-selected collections (lists of outcome labels).
    #[serde(default)]
    pub collections: Vec<Vec<Vec<String>>>,
}

impl Scenario {
    /// Mask of a list of outcome labels.
    pub fn mask(&self, labels: &[String]) -> Result<u32> {
        let mut m = 0;
        for l in labels {
            let i = self.outcomes.iter().position(|o| o == l).ok_or_else(|| Error::Key(l.clone()))?;
            m |= 1 << i;
        }
        if m == 0 {
            return Err(Error::Invalid("outcome subsets must be nonempty".into()));
        }
        Ok(m)
    }

    /// Builds the model, overriding the entry-game seed when `seed` is given.
    pub fn build(&self, seed: Option<u64>) -> Result<FiniteCapacityModel> {
        let ny = self.outcomes.len();
        let capacity: Arc<dyn Capacity> = match &self.capacity {
            CapacitySpec::RandomSet { laws } => {
                let laws = laws
                    .iter()
                    .map(|law| {
                        law.iter()
                            .map(|f| {
                                Ok(FocalSet { set: self.mask(&f.set)?, intercept: f.intercept, slope: f.slope.clone() })
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Arc::new(RandomSetCapacity::new(ny, laws)?)
            }
            CapacitySpec::Vacuous => Arc::new(VacuousCapacity { n_outcomes: ny }),
            CapacitySpec::EntryGame(spec) => {
                if ny != 4 {
                    return Err(Error::Invalid("the entry game has exactly four outcomes (00, 10, 01, 11)".into()));
                }
                let mut spec = spec.clone();
                if let Some(s) = seed {
                    spec.seed = s;
                }
                if spec.x_support.len() != self.covariates.len() {
                    return Err(Error::Dimension { expected: self.covariates.len(), found: spec.x_support.len() });
                }
                Arc::new(EntryGameCapacity::new(spec)?)
            }
        };
        if self.grid.lo.len() != self.grid.hi.len() {
            return Err(Error::Invalid("grid bounds must have equal length".into()));
        }
        let n = self.grid.points.unwrap_or(50);
        let axes = self.grid.lo.iter().zip(&self.grid.hi).map(|(a, b)| axis_linspace(*a, *b, n)).collect();
        FiniteCapacityModel::new(
            self.outcomes.clone(),
            self.covariates.clone(),
            self.p_y_given_x.clone(),
            capacity,
            axes,
        )
    }
}

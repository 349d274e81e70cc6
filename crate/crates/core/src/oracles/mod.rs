//! Brute-force reference computations.
//!
//! Each oracle works from the definition of its model (grid scans of the
//! defining inequalities, linear feasibility over latent atoms, instrument
//! sweeps, exhaustive constructive searches) and never calls the closed
//! forms in the model modules. They are slow by design and serve as ground
//! truth for tests and for the CLI `--oracle` cross-check.

mod bounds;
mod iv;
mod monotone;
mod selection;

use serde::{Deserialize, Serialize};

pub use bounds::{
    oracle_endpoint_masses, oracle_intersection_idset, oracle_mrb_by_instrument_sweep, sweep_columns, sweep_singletons,
    SweepColumn,
};
pub use iv::{
    binaryiv_oracle_family, max_joint_violation, oracle_binaryiv_consistent, oracle_binaryiv_consistent_exact,
    oracle_binaryiv_feasible, oracle_binaryiv_feasible_exact, oracle_binaryiv_grid, rational_arms, BinaryIvOracle,
};
pub use monotone::oracle_amiv_bounds;
pub use selection::{oracle_artstein_sharp, oracle_selectionable};

/// Resolution settings shared by the oracles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Grid step for one-dimensional parameters.
    pub grid_step_1d: f64,
    /// Grid step for the four-dimensional binary-IV parameter.
    pub grid_step_4d: f64,
    /// Number of steps per instrument pair in the instrument sweep.
    pub instrument_sweep_resolution: usize,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { grid_step_1d: 0.01, grid_step_4d: 0.05, instrument_sweep_resolution: 200, seed: 0 }
    }
}

impl OracleConfig {
    /// Checks that steps and resolutions are positive.
    pub fn validate(&self) -> crate::Result<()> {
        if !(self.grid_step_1d > 0.0) || !(self.grid_step_4d > 0.0) || self.instrument_sweep_resolution == 0 {
            return Err(crate::Error::Invalid("oracle steps and resolutions must be positive".into()));
        }
        Ok(())
    }
}

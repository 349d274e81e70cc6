//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by set algebra, lattice search and the model modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two sets (or a set and a point) live in spaces of different dimension.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    /// A feasibility computation produced non-finite or unstable values.
    #[error("numerically ill-conditioned computation (residual {residual:e})")]
    Numerical { residual: f64 },

    /// An assumption identifier is not part of the family.
    #[error("unknown assumption id `{0}`")]
    Key(String),

    /// The exhaustive search would exceed its subset budget.
    #[error("family of {size} assumptions exceeds the exhaustive budget of {limit}; shrink the family or split it into sub-families")]
    Budget { size: usize, limit: usize },

    /// The operation is not defined for the given inputs.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An instrument column has no positive mass.
    #[error("invalid instrument: {0}")]
    Instrument(String),

    /// A requested value lies outside the domain of the construction.
    #[error("outside domain: {0}")]
    Domain(String),

    /// A binary-IV assumption combination without a closed form.
    #[error("unsupported assumption combination {given}; supported combinations: {supported}")]
    UnsupportedCombo { given: String, supported: String },

    /// A violation pattern of the instrumental inequalities without a listed case.
    #[error("unsupported violation pattern: {0}")]
    UnsupportedPattern(String),

    /// Invalid model parameters (for example a covariance that is not positive definite).
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A conditioning cell holds fewer observations than required.
    #[error("cell `{label}` has {count} rows, fewer than the required {min}")]
    Cell { label: String, count: usize, min: usize },

    /// Input data failing validation (weights, probabilities, ordering of bounds).
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

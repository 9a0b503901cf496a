use thiserror::Error;

/// Failures raised by the numerical layers. Command-line failures live in
/// [`crate::cli::CliError`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (deviation {deviation:e} exceeds {tolerance:e})")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("not a density operator: {0}")]
    InvalidDensity(String),

    #[error("not a unit state vector: {0}")]
    InvalidState(String),

    #[error("invalid mixture ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("ancilla dimension {ancilla} is smaller than the rank {rank} of the density operator")]
    InsufficientAncilla { rank: usize, ancilla: usize },

    #[error("conjugated mixture vanishes (trace norm {0:e})")]
    ZeroImage(f64),

    #[error("first factor has dimension {d1}, but a separating vector needs at least {required}")]
    InsufficientDimension { d1: usize, required: usize },

    #[error("requested rank {rank} is outside 1..={dim}")]
    BadRank { rank: usize, dim: usize },

    #[error("achieved trace distance {achieved:e} is not below epsilon {epsilon:e}")]
    BudgetExceeded { achieved: f64, epsilon: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by simulator, projection and model operations.
///
/// Each variant carries a stable SCREAMING_SNAKE name (see [`Error::name`])
/// so that callers such as the experiment runner can report typed failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("duplicate qubit index {qubit} in gate operands")]
    DuplicateQubit { qubit: usize },

    #[error("register size mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },

    #[error("target sector weight {magnitude:.3e} is below the floor {floor:.3e}")]
    EmptySector { magnitude: f64, floor: f64 },

    #[error("oracle phases are degenerate: e^(i*phi) and e^(i*mu) coincide")]
    DegenerateOracle,

    #[error("eigenvalue index {index} out of range for a ladder of {len} eigenvalues")]
    LadderIndexOutOfRange { index: usize, len: usize },

    #[error("ladder m-values must start at 0 and be strictly increasing")]
    DegenerateLadder,

    #[error("operator handle is not flagged unitary")]
    NonUnitaryOperator,

    #[error("shot count must be at least 1")]
    ZeroShots,

    #[error("Trotter step count must be at least 1")]
    ZeroTrotterSteps,

    #[error("{n_qubits}-qubit register exceeds the limit of {limit} qubits")]
    RegisterTooLarge { n_qubits: usize, limit: usize },

    #[error("linear-combination coefficients are all zero")]
    ZeroCoefficients,

    #[error("an LCU plan needs at least one term")]
    EmptyLcuPlan,

    #[error("post-selection success probability is zero")]
    ZeroSuccessProbability,

    #[error("time step must be positive")]
    NonPositiveTimeStep,

    #[error("invalid model: {reason}")]
    InvalidModel { reason: String },
}

impl Error {
    /// Stable machine-readable name of the error kind.
    pub fn name(&self) -> &'static str {
        match self {
            Error::QubitOutOfRange { .. } => "QUBIT_OUT_OF_RANGE",
            Error::DuplicateQubit { .. } => "DUPLICATE_QUBIT",
            Error::DimensionMismatch { .. } => "DIMENSION_MISMATCH",
            Error::EmptySector { .. } => "EMPTY_SECTOR",
            Error::DegenerateOracle => "DEGENERATE_ORACLE",
            Error::LadderIndexOutOfRange { .. } => "LADDER_INDEX_OUT_OF_RANGE",
            Error::DegenerateLadder => "DEGENERATE_LADDER",
            Error::NonUnitaryOperator => "NON_UNITARY_OPERATOR",
            Error::ZeroShots => "ZERO_SHOTS",
            Error::ZeroTrotterSteps => "ZERO_TROTTER_STEPS",
            Error::RegisterTooLarge { .. } => "REGISTER_TOO_LARGE",
            Error::ZeroCoefficients => "ZERO_COEFFICIENTS",
            Error::EmptyLcuPlan => "EMPTY_LCU_PLAN",
            Error::ZeroSuccessProbability => "ZERO_SUCCESS_PROBABILITY",
            Error::NonPositiveTimeStep => "NON_POSITIVE_TIME_STEP",
            Error::InvalidModel { .. } => "INVALID_MODEL",
        }
    }
}

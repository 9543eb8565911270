use thiserror::Error;

/// Runner-level failures; each carries a stable name for the process exit
/// message, and simulator errors pass their own names through.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] symres_core::Error),
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("shot schedule must be non-empty with positive entries")]
    InvalidSchedule,
    #[error("this experiment samples: a seed is required (flag --seed or config)")]
    MissingSeed,
}

impl CliError {
    pub fn name(&self) -> &'static str {
        match self {
            CliError::Core(inner) => inner.name(),
            CliError::Config(_) => "CONFIG",
            CliError::Io(_) => "IO",
            CliError::InvalidSchedule => "INVALID_SCHEDULE",
            CliError::MissingSeed => "MISSING_SEED",
        }
    }
}

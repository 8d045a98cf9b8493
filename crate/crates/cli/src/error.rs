use thiserror::Error;

/// Failure of a CLI run, classified by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(#[from] clap::Error),

    #[error("{0}")]
    Validation(String),

    #[error(transparent)]
    Core(#[from] harmonic_chain::Error),

    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    /// 1 for invalid input, 2 for failures while computing or writing.
    pub fn exit_code(&self) -> i32 {
        use harmonic_chain::Error as E;
        match self {
            CliError::Usage(e) if !e.use_stderr() => 0,
            CliError::Usage(_) | CliError::Validation(_) => 1,
            CliError::Core(E::InvalidParameter { .. } | E::UnknownPreset(_) | E::DimensionMismatch { .. }) => 1,
            CliError::Core(_) | CliError::Runtime(_) => 2,
        }
    }
}

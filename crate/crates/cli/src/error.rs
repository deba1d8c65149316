use crate::scenario_file::ParseError;

/// Input errors.
pub const EXIT_INPUT: i32 = 2;
/// Singular denominators, grid overflow and other numerical failures.
pub const EXIT_NUMERICAL: i32 = 3;
/// Post-selection too rare to sample.
pub const EXIT_STARVATION: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] cheshire_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use cheshire_core::Error as E;
        match self {
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Usage(_) => EXIT_INPUT,
            CliError::Core(e) => match e {
                E::SingularDenominator { .. } | E::GridOverflow { .. } | E::NonFinite => EXIT_NUMERICAL,
                E::Starvation { .. } => EXIT_STARVATION,
                _ => EXIT_INPUT,
            },
        }
    }
}

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Io(String),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] stategame::Error),
}

impl CliError {
    /// 0 success, 2 parse or validation, 3 infeasible, 4 capacity, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use stategame::Error as E;
        match self {
            CliError::Parse(_) | CliError::Io(_) | CliError::Usage(_) => 2,
            CliError::Core(E::Infeasible(_) | E::InfeasibleRate { .. }) => 3,
            CliError::Core(E::Capacity { .. }) => 4,
            CliError::Core(E::Lp(_)) => 1,
            CliError::Core(_) => 2,
        }
    }

    pub fn hint(&self) -> Option<&'static str> {
        match self {
            CliError::Core(stategame::Error::Capacity { .. }) => {
                Some("reduce --n or --rate, raise --max-symbols, or use --engine ensemble")
            }
            _ => None,
        }
    }
}

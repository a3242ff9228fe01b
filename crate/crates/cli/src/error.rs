use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] chaos_boundary::Error),
    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use chaos_boundary::Error as E;
        match self {
            CliError::Core(E::Precondition(_) | E::Parse { .. }) | CliError::Usage(_) => 2,
            CliError::Core(E::TruncationLimit(_)) => 3,
            CliError::Core(E::Oracle(_) | E::OrbitBudget { .. }) => 4,
            CliError::Io(_) | CliError::Json(_) => 1,
        }
    }
}

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("unknown vertex label {0:?}")]
    UnknownLabel(String),

    #[error(transparent)]
    Graph(#[from] stpaths::Error),

    #[error("{0}")]
    Resource(String),

    #[error("output: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for usage and input problems, 3 for exhausted internal budgets.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Resource(_) | CliError::Graph(stpaths::Error::BudgetExceeded { .. }) => 3,
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => 3,
            _ => 2,
        }
    }
}

use thiserror::Error;

/// Errors produced by graph loading and path-counting queries.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("source and target must differ (both are vertex {0})")]
    SameEndpoints(usize),

    #[error("vertex {id} is out of range for a graph with {vertex_count} vertices")]
    VertexOutOfRange { id: usize, vertex_count: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("decision tree exceeded the budget of {budget} nodes")]
    BudgetExceeded { budget: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

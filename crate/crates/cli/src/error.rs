use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] possibility::Error),
    #[error("solver did not converge after {iterations} iterations (best residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
}

impl CliError {
    /// 1 I/O, 2 parse or usage, 3 domain, 4 non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse(_) | CliError::Usage(_) => 2,
            CliError::Domain(_) => 3,
            CliError::NonConvergence { .. } => 4,
        }
    }
}

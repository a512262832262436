use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SdpError {
    #[error("tolerance {0:e} outside the supported range [1e-12, 1e-4]")]
    InvalidTolerance(f64),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("problem is infeasible")]
    Infeasible,

    #[error("no optimum bracketed in [{lower}, {upper}]")]
    BracketNotFound { lower: f64, upper: f64 },

    #[error("numerical breakdown: {0}")]
    Numerical(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, SdpError>;

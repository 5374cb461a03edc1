use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Operating point outside the modelled regime.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Matrix that is not a physical two-mode Gaussian covariance.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Scalar argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("malformed input: {0}")]
    Parse(#[from] serde_json::Error),
}

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("invalid dimensions (n={n}, p={p}, q={q}): require 1 <= p <= n and 1 <= q <= n")]
    InvalidDims { n: usize, p: usize, q: usize },

    #[error("unsupported regime (n={n}, p={p}, q={q}): the density of the submatrix requires p + q <= n")]
    UnsupportedRegime { n: usize, p: usize, q: usize },

    #[error("Haar sample fell outside the density support: {0}")]
    SupportViolation(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

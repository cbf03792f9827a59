use thiserror::Error;

/// Errors surfaced by the exact and numeric layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol tables do not match")]
    TableMismatch,
    #[error("dimension error: {0}")]
    DimensionError(String),
    #[error("input vectors do not form a saturated lattice basis")]
    NotSaturated,
    #[error("matrix is not symplectic")]
    NotSymplectic,
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("density hypothesis not certified or asserted for the approximation base")]
    HypothesisViolation,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

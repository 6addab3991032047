//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(u32, u32),

    #[error("unsupported dimension n = {0} (need {1})")]
    UnsupportedDimension(u32, &'static str),

    #[error("zero vector has no inverse")]
    ZeroVector,

    #[error("argument within guard radius of a singularity: {0}")]
    Singularity(String),

    #[error("point maps to infinity (cx+d not invertible)")]
    Pole,

    #[error("multivector is not invertible")]
    NotInvertible,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("series failed its Cauchy-sequence guard: successive boxes differ by {delta:.3e} > {tol:.3e}")]
    CauchyGuard { delta: f64, tol: f64 },

    #[error("tail estimate {tail:.3e} exceeds tail tolerance {tol:.3e}")]
    TailTolerance { tail: f64, tol: f64 },

    #[error("coset enumeration guard exceeded: {0}")]
    ExplosionGuard(String),

    #[error("linear system is singular or ill-conditioned: {0}")]
    IllConditioned(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Usage(String),
}

impl Error {
    /// Stable machine-readable code, used by the CLI error JSON.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(..) => "dimension_mismatch",
            Error::UnsupportedDimension(..) => "unsupported_dimension",
            Error::ZeroVector => "zero_vector",
            Error::Singularity(_) => "singularity",
            Error::Pole => "pole",
            Error::NotInvertible => "not_invertible",
            Error::Precondition(_) => "precondition",
            Error::CauchyGuard { .. } => "cauchy_guard",
            Error::TailTolerance { .. } => "tail_tolerance",
            Error::ExplosionGuard(_) => "explosion_guard",
            Error::IllConditioned(_) => "ill_conditioned",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Usage(_) => "usage",
        }
    }
}

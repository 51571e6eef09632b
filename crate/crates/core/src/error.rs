use thiserror::Error;

use crate::haar::SeedSpec;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A sampled matrix failed its group invariants. This is an internal
    /// defect, never an expected outcome.
    #[error("group invariant violated ({what}) for {seed:?}: deviation {deviation:e}")]
    Invariant {
        what: &'static str,
        seed: Option<SeedSpec>,
        deviation: f64,
    },

    #[error("QR iteration did not converge after {iterations} iterations (dimension {dim}, seed {seed:?})")]
    NoConvergence {
        dim: usize,
        iterations: usize,
        seed: Option<SeedSpec>,
    },

    #[error("eigenvalue modulus {modulus} is off the unit circle (seed {seed:?})")]
    OffUnitCircle { modulus: f64, seed: Option<SeedSpec> },

    #[error("det(I - A) cross-check failed: LU gives {lu}, eigenvalue product gives {product} (seed {seed:?})")]
    CharPolyMismatch {
        lu: f64,
        product: f64,
        seed: Option<SeedSpec>,
    },

    #[error("missing input `{0}`")]
    MissingInput(&'static str),

    #[error("coefficient `{0}` is zero and appears as a divisor")]
    ZeroCoefficient(&'static str),

    #[error("3<e2> - 4<e1> = {0} is not positive; no effective matrix size")]
    NonpositiveDiscriminant(f64),

    #[error("prime data ends at {available}, but the cutoff needs every prime up to {required}")]
    InsufficientPrimes { available: u64, required: u64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

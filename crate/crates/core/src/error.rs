use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error(
        "eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:.3e})"
    )]
    EigenNoConvergence { sweeps: usize, residual: f64 },

    #[error("invalid Bloch vector: norm {0} exceeds 1")]
    InvalidBloch(f64),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid observable: {0}")]
    InvalidObservable(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("parameter `{name}` out of domain: {value}")]
    Domain { name: &'static str, value: f64 },

    #[error("index out of range: {0}")]
    Index(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("negative radicand {0:.3e} beyond round-off tolerance")]
    NegativeRadicand(f64),

    #[error("enumeration budget exceeded: {branches} branches > {budget}")]
    Budget { branches: f64, budget: f64 },

    #[error("affine span rank did not stabilise within {0} samples")]
    SpanBudget(usize),

    #[error("SDP is infeasible")]
    Infeasible,

    #[error("SDP did not converge: {0}")]
    NoConvergence(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

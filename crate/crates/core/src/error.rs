use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero {index} has modulus {modulus}, expected a point of the open unit disc")]
    ZeroOutsideDisc { index: usize, modulus: f64 },
    #[error("a Blaschke product needs at least one zero")]
    EmptyProduct,
    #[error("first zero must be 0 for basis generation, found {0}")]
    NotNormalized(String),
    #[error("evaluation point has modulus {0}, outside the closed unit disc")]
    OutsideClosedDisc(f64),
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("cap {cap} is insufficient, need at least {needed}")]
    InsufficientCap { cap: usize, needed: usize },
    #[error("vectors belong to different truncated spaces")]
    SpaceMismatch,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("operator window is empty")]
    EmptyWindow,
    #[error("ill-conditioned truncation: {0}")]
    IllConditioned(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("subspace is not invariant (residual {residual:e} > {tol:e})")]
    NotInvariant { residual: f64, tol: f64 },
    #[error("operator {operator} does not keep span vector {column} inside the model subspace (residual {residual:e})")]
    InvarianceFailure {
        operator: usize,
        column: usize,
        residual: f64,
    },
    #[error("BOUND_VIOLATION: {r} generators exceed the bound {bound}")]
    BoundViolation { r: usize, bound: usize },
    #[error("product leaves the exact window: {0}")]
    WindowOverflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;

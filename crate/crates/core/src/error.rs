use thiserror::Error;

/// Errors shared across the solver crate.
#[derive(Debug, Error)]
pub enum CnlsError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("state has nonpositive quartic interaction (not in the fiber domain)")]
    NotInE,

    #[error("direction is not tangent to the constraint sphere (violation {0:.3e})")]
    NotTangent(f64),

    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("undefined ratio: field vanishes identically")]
    UndefinedRatio,

    #[error("shooting bisection could not bracket: {0}")]
    NoBracket(String),

    #[error("diagonal curve undefined for beta <= -mu (got beta = {0})")]
    CurveUndefined(f64),

    #[error("linear solve failed: {0}")]
    SingularOperator(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("insufficient data: {0}")]
    FitRefused(String),

    #[error("empty branch: first continuation step failed ({0})")]
    EmptyBranch(String),
}

pub type Result<T> = std::result::Result<T, CnlsError>;

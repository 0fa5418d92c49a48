use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("division by an interval containing zero")]
    DivisionByZeroInterval,
    #[error("result endpoint not representable")]
    Overflow,
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("argument crosses a pole of tan")]
    BranchError,
    #[error("raw potential evaluated at a scaled-interval endpoint")]
    EndpointSingularity,
    #[error("comparison is undecidable at this interval width")]
    Indeterminate,
    #[error("interval width {width:e} exceeds the precision limit")]
    PrecisionLoss { width: f64 },
    #[error("mass matrix is not numerically positive definite")]
    NotPosDef,
    #[error("positive definiteness not certified on s in [{s_lo}, {s_hi}]")]
    PosDefFail { s_lo: f64, s_hi: f64 },
    #[error("discriminant of the reduced pencil is negative")]
    ComplexRoots,
    #[error("root isolation inconclusive on kappa in [{lo}, {hi}]")]
    Inconclusive { lo: f64, hi: f64 },
    #[error("positivity not certified on s in [{s_lo}, {s_hi}] at maximal depth")]
    DepthExceeded { s_lo: f64, s_hi: f64 },
    #[error("both rows of the matching matrix enclose zero")]
    DegenerateRow,
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error("malformed certificate: {0}")]
    Certificate(String),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::DomainError(msg.into())
}

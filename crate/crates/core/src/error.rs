use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library reports. The variant name doubles as the
/// machine-readable error code surfaced by the command-line tool.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("field has no involution: {0}")]
    NoInvolution(String),
    #[error("polynomial is zero or divisible by X")]
    ZeroOrXDivides,
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("the polynomial X is excluded")]
    IsX,
    #[error("matrix is not square")]
    NotSquare,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("multiplicity is not a nonnegative integer: {0}")]
    NonIntegralMultiplicity(String),
    #[error("form is degenerate")]
    Degenerate,
    #[error("odd dimension {0}")]
    OddDimension(usize),
    #[error("form is not skew-symmetric with zero diagonal")]
    NotSkew,
    #[error("polynomial is not self-reciprocal up to sign")]
    NotSelfBar,
    #[error("construction of the linear form failed: {0}")]
    ConstructionFailed(String),
    #[error("minimal polynomial of the block is not the expected prime power")]
    WrongMinimalPolynomial,
    #[error("singular linear system: {0}")]
    SingularSystem(String),
    #[error("value not divisible by the required uniformizer power")]
    ExtractionFailed,
    #[error("matrix does not preserve the form")]
    NotSymplectic,
    #[error("isotropic halves of a split block have unequal dimension")]
    UnequalHalves,
    #[error("elements live on incompatible forms or fields")]
    FormMismatch,
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("group order {order} exceeds cap {cap}")]
    CapExceeded { order: String, cap: u64 },
    #[error("matrix is not an element of the enumerated group")]
    NotInGroup,
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable error code, e.g. `"NotSymplectic"`.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidField(_) => "InvalidField",
            Error::DivisionByZero => "DivisionByZero",
            Error::FieldMismatch => "FieldMismatch",
            Error::ZeroInput => "ZeroInput",
            Error::NoInvolution(_) => "NoInvolution",
            Error::ZeroOrXDivides => "ZeroOrXDivides",
            Error::NotIrreducible => "NotIrreducible",
            Error::IsX => "IsX",
            Error::NotSquare => "NotSquare",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NonIntegralMultiplicity(_) => "NonIntegralMultiplicity",
            Error::Degenerate => "Degenerate",
            Error::OddDimension(_) => "OddDimension",
            Error::NotSkew => "NotSkew",
            Error::NotSelfBar => "NotSelfBar",
            Error::ConstructionFailed(_) => "ConstructionFailed",
            Error::WrongMinimalPolynomial => "WrongMinimalPolynomial",
            Error::SingularSystem(_) => "SingularSystem",
            Error::ExtractionFailed => "ExtractionFailed",
            Error::NotSymplectic => "NotSymplectic",
            Error::UnequalHalves => "UnequalHalves",
            Error::FormMismatch => "FormMismatch",
            Error::BoundExceeded(_) => "BoundExceeded",
            Error::BadParameters(_) => "BadParameters",
            Error::UnsupportedField(_) => "UnsupportedField",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::NotInGroup => "NotInGroup",
            Error::InvariantViolated(_) => "InvariantViolated",
            Error::Parse(_) => "Parse",
        }
    }
}

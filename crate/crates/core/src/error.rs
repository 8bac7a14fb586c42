use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not squarefree")]
    NonSquarefree(String),
    #[error("degenerate biquadratic field: {0}")]
    DegenerateBiquadratic(String),
    #[error("invalid field descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("monogenicity of Z[rho] unknown for a = {0} (a^2+3a+9 not squarefree); pass assume_monogenic")]
    MonogenicityUnknown(i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("operation requires a {0} field")]
    WrongFieldKind(&'static str),
    #[error("operation requires degree {0}")]
    WrongDegree(usize),
    #[error("box too large: about {predicted} candidates, cap {cap}")]
    BoxTooLarge { predicted: f64, cap: f64 },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("not a simplex: {0}")]
    NotASimplex(String),
    #[error("degenerate plane: {0}")]
    DegeneratePlane(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("not certifiable: {0}")]
    NotCertifiable(String),
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("element is not integral")]
    NotIntegral,
    #[error("element is not totally positive")]
    NotTotallyPositive,
    #[error("unit norm must be {0}")]
    WrongNorm(i64),
    #[error("no unit with the requested signature")]
    NoSuchUnit,
    #[error("incomplete sail data: {0}")]
    IncompleteSailData(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

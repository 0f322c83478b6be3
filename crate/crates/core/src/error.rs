use thiserror::Error;

/// Failures while reading a domain description.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("malformed domain `{0}`: expected `a,b`, `a,b;c,d;...` or `curve:<id>`")]
    Malformed(String),
    #[error("empty interval [{a}, {b}]: left endpoint must be below right endpoint")]
    EmptyInterval { a: f64, b: f64 },
    #[error("interval parts [{0}, {1}] and [{2}, {3}] overlap or are out of order")]
    Overlap(f64, f64, f64, f64),
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("parameter {0} outside [0, 1]")]
    ParamOutOfRange(f64),
    #[error("initial candidate {0} must lie strictly inside (0, 1)")]
    InitialCandidate(f64),
    #[error("candidate set is empty")]
    NoCandidates,
    #[error("gap too small to bisect near {0}")]
    DegenerateGap(f64),
    #[error("duplicate point {0}")]
    Duplicate(f64),
    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("stage {stage} exceeds available sequence length {len}")]
    StageOutOfRange { stage: usize, len: usize },
    #[error("stages must be strictly increasing")]
    StagesNotIncreasing,
    #[error("point {x} lies outside [{a}, {b}]")]
    OutsideSupport { x: f64, a: f64, b: f64 },
    #[error("unknown target distribution `{0}`")]
    UnknownTarget(String),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("unknown node source `{0}`")]
    UnknownNodeSource(String),
    #[error("operation requires {0}")]
    UnsupportedDomain(&'static str),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("generator x{index} out of range (word has {num_generators} generators)")]
    GeneratorOutOfRange { index: usize, num_generators: usize },
    #[error("zero exponent at byte {pos}")]
    ZeroExponent { pos: usize },
    #[error("operation requires a non-trivial word")]
    EmptyWord,
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("expected {expected} permutations, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("point {point} out of range 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid Young diagram: {0}")]
    InvalidDiagram(String),
    #[error("diagram ({mu}) is not contained in ({lambda})")]
    NotContained { lambda: String, mu: String },
    #[error("degree {n} too small, need at least {needed}")]
    DegreeTooSmall { n: usize, needed: usize },
    #[error("invalid sampler: {0}")]
    InvalidSampler(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("enumeration of {size} elements exceeds the cap of {cap}")]
    CapExceeded { size: u128, cap: u128 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded { .. } => 3,
            Error::Io(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

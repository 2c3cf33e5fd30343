use thiserror::Error;

/// Errors raised by the library. Every variant names the violated
/// invariant and, where meaningful, the measured magnitude.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix is not Hermitian: max entrywise deviation {deviation:.3e} exceeds {tolerance:.0e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("trace is {trace:.12}, expected 1 within {tolerance:.0e}")]
    TraceNotOne { trace: f64, tolerance: f64 },

    #[error("matrix is not positive semidefinite: minimum eigenvalue {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("operator is not a rank-1 projector: {reason}")]
    NotProjector { reason: String },

    #[error("mixing probabilities invalid: {reason}")]
    InvalidProbabilities { reason: String },

    #[error("{name} = {value} outside {range}")]
    OutOfRange { name: &'static str, value: f64, range: &'static str },

    #[error("state is not entangled: Schmidt angle {schmidt_angle:.3e} rad")]
    NotEntangled { schmidt_angle: f64 },

    #[error("conditional state for setting {setting}, outcome {outcome} is not pure: purity {purity:.12}")]
    ImpureConditionalState { setting: usize, outcome: u8, purity: f64 },

    #[error("conditional states ({first:?}) and ({second:?}) coincide: fidelity {fidelity:.12}")]
    CoincidentConditionalStates { first: (usize, u8), second: (usize, u8), fidelity: f64 },

    #[error("conditional state for setting {setting}, outcome {outcome} has zero probability")]
    ZeroProbabilityBranch { setting: usize, outcome: u8 },

    #[error("directions {first} and {second} define the same measurement (separation {separation:.3e} rad)")]
    DuplicateDirections { first: usize, second: usize, separation: f64 },

    #[error("reference state degenerate: conditional-state norm {norm:.3e} for setting {setting}")]
    DegenerateReference { setting: usize, norm: f64 },

    #[error("{k} settings exceeds the enumeration limit of {limit}")]
    TooManySettings { k: usize, limit: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("I/O error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Io(err.to_string())
    }
}

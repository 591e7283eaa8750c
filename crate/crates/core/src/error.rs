use thiserror::Error;

/// Errors produced by model construction, grey arithmetic and the engines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("kernel and greyness must be finite and greyness non-negative (got {kernel}, {greyness})")]
    InvalidGgn { kernel: f64, greyness: f64 },

    #[error("interval bounds must be finite with lower <= upper (got [{lower}, {upper}])")]
    InvalidInterval { lower: f64, upper: f64 },

    #[error("domain must have positive measure (got [{lower}, {upper}])")]
    InvalidDomain { lower: f64, upper: f64 },

    #[error("interval list must be non-empty")]
    EmptyIntervals,

    #[error("probabilities must match the interval count, be positive and sum to 1")]
    BadProbabilities,

    #[error("interval [{lower}, {upper}] lies outside the domain [{dom_lower}, {dom_upper}]")]
    IntervalOutsideDomain {
        lower: f64,
        upper: f64,
        dom_lower: f64,
        dom_upper: f64,
    },

    #[error("division by a grey number with zero kernel")]
    ZeroKernel,

    #[error("operation produced a non-finite kernel")]
    NonFiniteResult,

    #[error("vector lengths differ ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("matrix of side {side} cannot act on a vector of length {len}")]
    DimensionMismatch { side: usize, len: usize },

    #[error("matrix rows must be square ({rows} rows, row {row} has {cols} columns)")]
    NotSquare { rows: usize, row: usize, cols: usize },

    #[error("lambda must be positive and finite (got {0})")]
    InvalidLambda(f64),

    #[error("interval weight at ({row}, {col}) spans zero; comparison matrix is undefined")]
    SpansZero { row: usize, col: usize },

    #[error("model `{model}` does not support the {engine} engine: {reason}")]
    UnsupportedEngine {
        model: String,
        engine: String,
        reason: String,
    },

    #[error("trajectory needs at least 2 states to classify")]
    TrajectoryTooShort,

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("model file: {0}")]
    ModelFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

/// Crate error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("variable {index} ({name}): value {value} outside domain")]
    OutOfDomain {
        index: usize,
        name: String,
        value: f64,
    },

    #[error("decision vector has {got} slots, problem declares {expected}")]
    VectorLength { got: usize, expected: usize },

    #[error("evaluator failed on {vector:?}: {message}")]
    Evaluation { message: String, vector: Vec<f64> },

    #[error("seed {index} rejected: {reason}")]
    SeedRejected { index: usize, reason: String },

    #[error("empty front: no lower bound available")]
    EmptyFront,

    #[error("incumbent merge rejected: individual {index} is infeasible (violation {violation})")]
    InfeasibleMerge { index: usize, violation: f64 },

    #[error("problem exceeds brute-force oracle bounds: {reason}")]
    OracleBounds { reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid GA parameters: {0}")]
    Params(String),
}

pub type Result<T> = std::result::Result<T, Error>;

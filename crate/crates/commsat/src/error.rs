//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied parameter is outside its documented domain.
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    /// A variable index fell outside the formula or assignment it was used
    /// with (variables are 1-based and bounded by `n`).
    #[error("variable {var} out of range 1..={n}")]
    VariableOutOfRange { var: i64, n: usize },

    /// `select_one` kept drawing communities with fewer than three distinct
    /// variables.
    #[error("no community with >= 3 distinct variables after {attempts} draws")]
    CommunityTooSmall { attempts: usize },

    /// Rejection sampling could not produce a clause that meets its
    /// constraints within the retry budget.
    #[error("clause selection infeasible: {0}")]
    InfeasibleSelection(String),

    /// Parse failure in a DIMACS CNF file.
    #[error("dimacs parse error at line {line}: {msg}")]
    DimacsParse { line: usize, msg: String },

    /// Metadata file malformed or written by an incompatible version.
    #[error("metadata error: {0}")]
    Metadata(String),

    /// Modularity was asked about a node the partition does not cover.
    #[error("partition does not cover variable {var}")]
    PartitionIncomplete { var: u32 },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

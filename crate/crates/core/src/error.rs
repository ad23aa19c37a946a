use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, RcaError>;

#[derive(Debug, Error)]
pub enum RcaError {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    Dimension {
        context: &'static str,
        expected: String,
        found: String,
    },

    #[error("matrix must have at least one row and one column ({context})")]
    Empty { context: &'static str },

    #[error("non-finite entry at ({row}, {col}) in {context}")]
    NonFinite {
        context: &'static str,
        row: usize,
        col: usize,
    },

    #[error("matrix is not symmetric: max |a_ij - a_ji| = {asymmetry:e} exceeds {tolerance:e}")]
    NotSymmetric { asymmetry: f64, tolerance: f64 },

    #[error(
        "matrix is not positive definite: smallest eigenvalue {eigenvalue:e} (jitter {jitter:e})"
    )]
    NotPositiveDefinite { eigenvalue: f64, jitter: f64 },

    #[error("covariance of view {view} is degenerate: smallest eigenvalue {eigenvalue:e}")]
    DegenerateView { view: usize, eigenvalue: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("labels must contain at least one positive and one negative")]
    SingleClass,

    #[error("iteration {iteration}, {block} solve: {source}")]
    Iteration {
        iteration: usize,
        block: &'static str,
        #[source]
        source: Box<RcaError>,
    },

    #[error("line {line}: expected {expected} fields, found {found}")]
    RaggedRow {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("line {line}, column {column}: cannot parse `{cell}` as a number")]
    ParseCell {
        line: usize,
        column: usize,
        cell: String,
    },

    #[error("no numeric data found")]
    EmptyInput,

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: Box<RcaError>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl RcaError {
    pub(crate) fn dimension(
        context: &'static str,
        expected: impl ToString,
        found: impl ToString,
    ) -> Self {
        RcaError::Dimension {
            context,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        RcaError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

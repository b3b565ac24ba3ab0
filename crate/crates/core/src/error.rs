use thiserror::Error;

use crate::certify::HypothesisReport;

/// Errors produced by polytope construction, measures and certificates.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("polytope is unbounded")]
    Unbounded,

    #[error("origin is not interior: constraint {index} has offset {offset:e}")]
    OriginNotInterior { index: usize, offset: f64 },

    #[error("polytope has empty interior")]
    EmptyInterior,

    #[error("basis has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("problem too large: {0}")]
    TooLarge(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("degenerate simplex")]
    DegenerateSimplex,

    #[error("distance hypothesis fails ({} face(s) below threshold)", .0.failures())]
    HypothesisFailed(Box<HypothesisReport>),

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("no valid circle position: |b_2| = {0} does not exceed 1")]
    NoValidPosition(f64),

    #[error("vectors are not unit length (max deviation {0:e})")]
    NotUnitVectors(f64),

    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

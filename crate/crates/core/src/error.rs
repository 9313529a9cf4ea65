use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("letter index {index} out of range for rank {rank}")]
    LetterOutOfRange { index: usize, rank: usize },

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("prefix length {k} out of range for rank {rank}")]
    PrefixOutOfRange { k: usize, rank: usize },

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not unimodular: {0}")]
    NotUnimodular(String),

    #[error("matrix does not have the required block shape: {0}")]
    BlockShape(String),

    #[error("vectors do not span a direct summand")]
    NotSummand,

    #[error("simplex is not in the complex")]
    SimplexNotInComplex,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

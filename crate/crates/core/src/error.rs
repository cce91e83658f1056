use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("empty document: no tokens left after filtering")]
    EmptyDocument,
    #[error("duplicate product id {0:?}")]
    DuplicateId(String),
    #[error("unknown product id {0:?}")]
    UnknownId(String),
    #[error("span [{start},{end}) is invalid for a text of {len} characters")]
    SpanOutOfBounds { start: usize, end: usize, len: usize },
    #[error("annotation set for {0:?} has no annotators")]
    NoAnnotators(String),
    #[error("duplicate annotator {annotator:?} for product {product:?}")]
    DuplicateAnnotator { product: String, annotator: String },
    #[error("flag vector has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("no usable word vectors")]
    NoVectors,
    #[error("product {0:?} is untargetable: no flagged token has a word vector")]
    Untargetable(String),
    #[error("empty input sequence")]
    EmptySequence,
    #[error("empty batch")]
    EmptyBatch,
    #[error("non-finite gradient in parameter block {0}")]
    NonFiniteGradient(&'static str),
    #[error("training diverged at epoch {epoch}; parameters restored to the last finite state")]
    Diverged { epoch: usize },
    #[error("uninterpretable zero vector")]
    ZeroVector,
    #[error("dictionary is empty")]
    EmptyDictionary,
    #[error("vector is not unit norm (norm {0})")]
    NotUnitNorm(f64),
    #[error("invalid threshold {0}")]
    InvalidThreshold(f64),
    #[error("no positive labels to evaluate against")]
    NoPositives,
    #[error("labeled pair ({0:?}, {1:?}) has no score")]
    UnscoredPair(String, String),
    #[error("empty query")]
    EmptyQuery,
    #[error("need at least {needed} products, found {found}")]
    TooFewPoints { needed: usize, found: usize },
    #[error("candidate pool has {pool} members, need at least {needed}")]
    PoolTooSmall { pool: usize, needed: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

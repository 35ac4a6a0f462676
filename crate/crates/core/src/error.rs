use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Unified error type for every fallible operation in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An operation that needs at least one post was given none.
    #[error("empty corpus")]
    EmptyCorpus,

    /// An operation that needs a non-empty collection was given an empty one.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    /// Training data contains only one of the two classes.
    #[error("training data contains a single class")]
    DegenerateLabels,

    /// Judgment sets passed to an agreement statistic have unequal vote counts.
    #[error("judgment sets have unequal vote counts")]
    RaggedJudgments,

    /// Every vote fell in one category, so chance agreement is 1 and kappa is undefined.
    #[error("chance agreement is 1: kappa undefined")]
    DegenerateMarginals,

    /// Second-stage judgments were supplied for a post that the first stage
    /// already resolved as sarcastic from text alone.
    #[error("second-stage judgments present for post `{post_id}` already resolved in stage one")]
    ProtocolViolation { post_id: String },

    /// A detected concept is not in the concept vocabulary.
    #[error("unknown concept `{0}`")]
    UnknownConcept(String),

    /// A post references an image the feature store does not know.
    #[error("missing image features for `{0}`")]
    MissingImage(String),

    /// Two feature blocks in one vector share a name.
    #[error("duplicate block name `{0}`")]
    DuplicateBlock(String),

    /// A dense vector or sparse index does not fit the declared dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },

    /// A feature vector's block layout differs from the layout a model was trained on.
    #[error("feature layout does not match model layout")]
    LayoutMismatch,

    /// Not enough negative posts to mirror the positives of a gold set.
    #[error("not enough negatives to balance the gold set: need {need}, have {have}")]
    InsufficientNegatives { need: usize, have: usize },

    /// Gold agreement thresholds are restricted to the three published levels.
    #[error("gold threshold must be 0.5, 0.8 or 1.0 (got {0})")]
    InvalidThreshold(f64),

    /// A configuration value is out of range or inconsistent.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A data file could not be parsed.
    #[error("malformed {what} at line {line}: {msg}")]
    Malformed {
        what: &'static str,
        line: usize,
        msg: String,
    },

    /// A serialized model or checkpoint is corrupt or has the wrong version.
    #[error("bad model file: {0}")]
    BadModelFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("node `{0}` labeled more than once")]
    DuplicateLabel(String),

    #[error("{count} node(s) left unlabeled (first: `{first}`)")]
    UnlabeledNodes { count: usize, first: String },

    #[error("graph carries no category labels")]
    Unlabeled,

    #[error("graph has no edges to split")]
    EmptyEdgeSet,

    #[error("invalid split ratios: {0}")]
    InvalidRatios(String),

    #[error("requested {requested} negative edges but only {available} admissible non-edges remain (short by {})", requested - available)]
    InsufficientNonEdges { requested: usize, available: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("walk corpus is empty")]
    EmptyCorpus,

    #[error("input contains a single class; need both positives and negatives")]
    SingleClass,

    #[error("shape mismatch: expected {expected}, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("cosine similarity undefined: zero vector for {0}")]
    ZeroVector(String),

    #[error("category matrix: {0}")]
    CategoryMatrix(String),

    #[error("unknown category `{0}`")]
    UnknownCategory(String),

    #[error("distance kind `{0}` needs {1}")]
    MissingContext(String, &'static str),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: malformed record: {message}")]
    MalformedRecord {
        path: String,
        line: usize,
        message: String,
    },

    #[error("unsupported format version {found} (expected {expected})")]
    FormatVersion { expected: u32, found: u32 },

    #[error("{path}:{line}: unknown label {label:?}")]
    UnknownLabel {
        path: String,
        line: usize,
        label: String,
    },

    #[error("{path}:{line}: duplicate document id {id:?}")]
    DuplicateId {
        path: String,
        line: usize,
        id: String,
    },

    #[error("invalid schema: {0}")]
    InvalidSchema(String),

    #[error("invalid document {id:?}: {message}")]
    InvalidDocument { id: String, message: String },

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("train fraction {0} is outside (0, 1)")]
    InvalidFraction(f64),

    #[error("stratified splitting is only defined for single-label corpora")]
    StratifyMultiLabel,

    #[error("class {label:?} has {count} document(s); stratified splitting needs at least 2 per class")]
    StratifyTooFewDocs { label: String, count: usize },

    #[error("split needs at least 2 documents, corpus has {0}")]
    CorpusTooSmall(usize),

    #[error("sequence length must be at least 1")]
    NonPositiveLength,

    #[error("training set is empty")]
    EmptyTrainingSet,

    #[error("no terms survive vocabulary construction: {0}")]
    EmptyVocabulary(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("class index {index} out of range for {n_classes} classes")]
    ClassOutOfRange { index: usize, n_classes: usize },

    #[error("{algorithm} needs at least 2 distinct classes in the training set")]
    SingleClass { algorithm: String },

    #[error("multinomial naive bayes requires non-negative feature weights")]
    NegativeWeight,

    #[error("label {label:?} has no {missing} examples; binary relevance needs both")]
    DegenerateLabel { label: String, missing: String },

    #[error("model expects {expected} classes, got {found}")]
    NotBinary { expected: usize, found: usize },

    #[error("threshold {0} is outside (0, 1)")]
    InvalidThreshold(f64),

    #[error("empty input")]
    EmptyInput,

    #[error("total support is zero")]
    ZeroSupport,

    #[error("AUC is undefined without both positive and negative instances")]
    SingleClassAuc,

    #[error("label matrix shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("vocabulary hash mismatch: model was trained against {expected}, file has {found}")]
    VocabHashMismatch { expected: String, found: String },

    #[error("metric {metric} is not available in {mode} mode")]
    MetricUnavailable { metric: String, mode: String },

    #[error("document is empty after normalization")]
    EmptyAfterNormalization,

    #[error("invalid synthetic corpus spec: {0}")]
    InvalidSynthSpec(String),

    #[error("json error in {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("toml error in {path}: {message}")]
    Toml { path: String, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn json(path: impl Into<String>, source: serde_json::Error) -> Self {
        Error::Json {
            path: path.into(),
            source,
        }
    }
}

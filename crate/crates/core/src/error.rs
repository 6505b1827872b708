use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("negative weight {weight} ({context})")]
    NegativeWeight { weight: f64, context: String },

    #[error("empty vertex label ({context})")]
    EmptyLabel { context: String },

    #[error("duplicate vertex label `{label}`")]
    DuplicateLabel { label: String },

    #[error("no vertex weight given for `{label}`")]
    MissingVertexWeight { label: String },

    #[error("unknown vertex `{label}`")]
    UnknownLabel { label: String },

    #[error("vertex index {index} out of range (network has {count} vertices)")]
    VertexOutOfRange { index: usize, count: usize },

    #[error("cluster id {id} out of range (clustering has {count} clusters)")]
    ClusterOutOfRange { id: usize, count: usize },

    #[error("invalid clustering: {reason}")]
    InvalidClustering { reason: String },

    #[error("vertex sets overlap (vertex {vertex} is in both)")]
    OverlappingSets { vertex: usize },

    #[error("vertex set has zero total weight, density is undefined")]
    ZeroSetWeight,

    #[error("network has no vertices")]
    EmptyNetwork,

    #[error("network has zero total edge weight")]
    ZeroTotalEdgeWeight,

    #[error("network has zero total vertex weight")]
    ZeroTotalVertexWeight,

    #[error("no edge between vertices {u} and {v}")]
    NoSuchEdge { u: usize, v: usize },

    #[error("invalid parameter: {reason}")]
    InvalidParameter { reason: String },

    #[error("coincident positions: {context}")]
    CoincidentPositions { context: String },

    #[error("non-finite value in {context}")]
    NonFinite { context: String },

    #[error("network too large for exhaustive search ({n} vertices, limit {max})")]
    TooLarge { n: usize, max: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("labels do not match the network: missing [{}], unexpected [{}]",
            missing.join(", "), extra.join(", "))]
    LabelMismatch {
        missing: Vec<String>,
        extra: Vec<String>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid_parameter(reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

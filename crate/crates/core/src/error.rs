use crate::topology::VertexId;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid graph spec: {0}")]
    InvalidSpec(String),

    #[error("invalid cost model: {0}")]
    InvalidCostModel(String),

    #[error("source and destination coincide at vertex {0}")]
    SameEndpoints(VertexId),

    #[error("stepper `{stepper}` failed to approach {target} from {at}")]
    NoProgress {
        stepper: &'static str,
        at: VertexId,
        target: VertexId,
    },

    #[error("enumeration needs {terms} terms, limit is {limit}")]
    EnumerationTooLarge { terms: u128, limit: u128 },

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("plot: {0}")]
    Plot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

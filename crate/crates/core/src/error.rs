use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime below 2^31")]
    InvalidPrime(u64),
    #[error("unrecognized field '{0}' (expected q or f<p>)")]
    InvalidField(String),
    #[error("vertex count {0} exceeds the supported maximum of {max}", max = crate::simplicial::MAX_VERTICES)]
    TooManyVertices(usize),
    #[error("vertex {vertex} out of range 1..={m}")]
    VertexOutOfRange { vertex: u32, m: usize },
    #[error("vertex list {0:?} is not strictly increasing")]
    UnsortedFace(Vec<u32>),
    #[error("subcomplex contains a face {0:?} that is not in the ambient complex")]
    NotASubcomplex(Vec<u32>),
    #[error("join of complexes with overlapping vertex labels {0:?}")]
    OverlappingLabels(Vec<u32>),
    #[error("complex is not flag")]
    NotFlag,
    #[error("invalid dg module: {0}")]
    InvalidModule(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

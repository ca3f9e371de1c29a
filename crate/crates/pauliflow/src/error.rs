use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid angle: {0}")]
    InvalidAngle(String),
    #[error("angle {0} is not a multiple of pi/2")]
    NonClifford(String),
    #[error("invalid pauli string `{0}`")]
    InvalidString(String),
    #[error("strings {0} and {1} anticommute")]
    Anticommuting(String, String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no pauli flow exists")]
    NoFlow,
    #[error("flow is not valid: {0}")]
    InvalidFlow(String),
    #[error("inconsistent tableau: {0}")]
    InconsistentTableau(String),
    #[error("dense evaluation needs {needed} qubits, cap is {cap}")]
    CapExceeded { needed: usize, cap: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

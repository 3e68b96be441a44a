use thiserror::Error;

pub type Result<T, E = PhaseWalkError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum PhaseWalkError {
    #[error("empty graph: {0}")]
    EmptyGraph(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("edge list line {line}: {message}")]
    EdgeList { line: usize, message: String },

    #[error("spectrum is not periodic: eigenvalue {eigenvalue} is not an integer multiple of 1/{scale}")]
    Periodicity { eigenvalue: f64, scale: u64 },

    #[error("graph has {n} vertices, dense size cap is {cap}")]
    Size { n: usize, cap: usize },

    #[error("graph is disconnected (zero eigenvalue has multiplicity {0})")]
    Disconnected(usize),

    #[error("degenerate graph: {0}")]
    DegenerateGraph(String),

    #[error("numerical domain error in {context}: argument {value}")]
    NumericalDomain { context: &'static str, value: f64 },

    #[error("no closed form available for family {0}")]
    UnsupportedFamily(String),

    #[error("Krylov reduction failed: {0}")]
    Reduction(String),

    #[error("model/schedule mismatch: {0}")]
    ModelScheduleMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

use thiserror::Error;

/// Errors raised by the qutrit toolkit.
///
/// Every variant is a domain error: the inputs were well-formed enough to
/// parse but violate a precondition of the requested operation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension cap exceeded: {num_qutrits} qutrits (max {max})")]
    DimensionCap { num_qutrits: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("invalid symbol {symbol} in {context}")]
    InvalidSymbol { symbol: i64, context: &'static str },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("coefficient is zero")]
    ZeroCoefficient,

    #[error("unsupported weight {weight} (allowed {min}..={max})")]
    UnsupportedWeight { weight: usize, min: usize, max: usize },

    #[error("incomplete expansion: {found} of {expected} blocks")]
    IncompleteExpansion { found: usize, expected: usize },

    #[error("unsupported number of colors k = {0}; k must be a power of 3")]
    UnsupportedK(usize),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid QAOA parameters: {0}")]
    InvalidParameters(String),

    #[error("gate {0} has no ternary parity map")]
    UnsupportedGate(String),

    #[error("parity map is not invertible over GF(3)")]
    NotInvertible,

    #[error("topology has no Hamiltonian path under the declared order: {0}")]
    NoHamiltonianPath(String),

    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("terminals cannot be connected: {0}")]
    DisconnectedTerminals(String),

    #[error("no decreasing Steiner tree: {0}")]
    NoDecreasingTree(String),

    #[error("oracle self-check failed: residual {residual:e}")]
    OracleMismatch { residual: f64 },

    #[error("io: {0}")]
    Io(String),

    #[error("json: {0}")]
    Json(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionCap { .. } => "DimensionCap",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::InvalidSymbol { .. } => "InvalidSymbol",
            Error::InvalidGate(_) => "InvalidGate",
            Error::InvalidCircuit(_) => "InvalidCircuit",
            Error::ZeroCoefficient => "ZeroCoefficient",
            Error::UnsupportedWeight { .. } => "UnsupportedWeight",
            Error::IncompleteExpansion { .. } => "IncompleteExpansion",
            Error::UnsupportedK(_) => "UnsupportedK",
            Error::InvalidGraph(_) => "InvalidGraph",
            Error::InvalidParameters(_) => "InvalidParameters",
            Error::UnsupportedGate(_) => "UnsupportedGate",
            Error::NotInvertible => "NotInvertible",
            Error::NoHamiltonianPath(_) => "NoHamiltonianPath",
            Error::InvalidTopology(_) => "InvalidTopology",
            Error::DisconnectedTerminals(_) => "DisconnectedTerminals",
            Error::NoDecreasingTree(_) => "NoDecreasingTree",
            Error::OracleMismatch { .. } => "OracleMismatch",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

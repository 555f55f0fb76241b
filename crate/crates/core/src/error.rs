use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational number `{0}`")]
pub struct ParseRationalError(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph has a directed cycle: {}", .0.join(" -> "))]
    Cycle(Vec<String>),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("path enumeration exceeded the limit of {limit} paths")]
    PathOverflow { limit: usize },

    #[error("adjustment set overlaps the treatment set at {}", .0.join(", "))]
    AdjustmentOverlapsTreatment(Vec<String>),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid intervention: {0}")]
    InvalidIntervention(String),

    #[error("value `{value}` is not in the domain of `{node}`")]
    OutOfDomain { node: String, value: String },

    #[error("enumeration needs {required} disturbance tuples, above the cap of {cap}")]
    EnumerationCap { required: u128, cap: u64 },

    #[error("conditioning event has probability zero: {0}")]
    ZeroProbability(String),

    #[error("positivity fails at {0}")]
    Positivity(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid generator profile: {0}")]
    InvalidProfile(String),

    #[error("model file: {0}")]
    Format(String),

    #[error(transparent)]
    Rational(#[from] ParseRationalError),
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("edge {edge}: transmission probability {prob} outside [0, 1]")]
    ProbabilityRange { edge: usize, prob: f64 },

    #[error("edge {edge}: negative or NaN cost {cost}")]
    NegativeCost { edge: usize, cost: f64 },

    #[error("duplicate undirected edge between {u} and {v}")]
    DuplicateEdge { u: String, v: String },

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("no source vertex given")]
    MissingSource,

    #[error("vertex id {id} out of range for {n} vertices")]
    VertexOutOfRange { id: usize, n: usize },

    #[error("edge id {id} out of range for {m} edges")]
    EdgeOutOfRange { id: usize, m: usize },

    #[error("node removal may not contain the source vertex {0}")]
    SourceRemoved(usize),

    #[error("intervention kind does not match the operation")]
    KindMismatch,

    #[error("seed set is empty")]
    EmptySeeds,

    #[error("percolation sample does not belong to this network: {0}")]
    SampleMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("transmission probabilities are not uniform")]
    NonUniformProbability,

    #[error("edge costs are not all 1")]
    NonUnitCost,

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("enumeration too large: {count} terms exceed the cap of {cap}")]
    EnumerationTooLarge { count: f64, cap: f64 },

    #[error("no removable {0} in the instance")]
    NothingRemovable(&'static str),

    #[error("LP solver failed: {0}")]
    Solver(String),

    #[error("guarantee violated: {0}")]
    GuaranteeViolated(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Validation failures are user errors; everything else is a solver or
    /// environment failure.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::Solver(_) | Error::GuaranteeViolated(_) | Error::Io(_)
        )
    }
}

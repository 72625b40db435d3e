use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] epictrl_core::Error),

    #[error("{path}: {message}")]
    Input { path: String, message: String },

    #[error("config: {0}")]
    Config(String),

    #[error("out of regime: {0}")]
    OutOfRegime(String),

    #[error("writing output: {0}")]
    Output(String),
}

impl CliError {
    /// 2 for bad input, 3 for solver or output failures, 4 for a strict
    /// regime failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_validation() => 2,
            CliError::Core(_) | CliError::Output(_) => 3,
            CliError::Input { .. } | CliError::Config(_) => 2,
            CliError::OutOfRegime(_) => 4,
        }
    }

    /// Stable snake_case name printed as `error_code=<name>`.
    pub fn code(&self) -> &'static str {
        use epictrl_core::Error as E;
        match self {
            CliError::Core(e) => match e {
                E::Parse { .. } => "parse",
                E::ProbabilityRange { .. } => "probability_range",
                E::NegativeCost { .. } => "negative_cost",
                E::DuplicateEdge { .. } => "duplicate_edge",
                E::UnknownVertex(_) => "unknown_vertex",
                E::MissingSource => "missing_source",
                E::VertexOutOfRange { .. } => "vertex_out_of_range",
                E::EdgeOutOfRange { .. } => "edge_out_of_range",
                E::SourceRemoved(_) => "source_removed",
                E::KindMismatch => "kind_mismatch",
                E::EmptySeeds => "empty_seeds",
                E::SampleMismatch(_) => "sample_mismatch",
                E::InvalidParameter(_) => "invalid_parameter",
                E::Domain(_) => "domain",
                E::NonUniformProbability => "non_uniform_probability",
                E::NonUnitCost => "non_unit_cost",
                E::TooLarge(_) => "too_large",
                E::EnumerationTooLarge { .. } => "enumeration_too_large",
                E::NothingRemovable(_) => "nothing_removable",
                E::Solver(_) => "solver",
                E::GuaranteeViolated(_) => "guarantee_violated",
                E::Io(_) => "io",
            },
            CliError::Input { .. } => "input",
            CliError::Config(_) => "config",
            CliError::OutOfRegime(_) => "out_of_regime",
            CliError::Output(_) => "output",
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

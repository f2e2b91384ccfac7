use thiserror::Error;

use crate::lp::LpStatus;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("shape mismatch in {what}: expected {expected}, found {found}")]
    Shape {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("context index {index} out of range ({count} contexts)")]
    ContextIndex { index: usize, count: usize },

    #[error("scenario has {count} global assignments, above the limit of {limit}")]
    TooManyAssignments { count: u128, limit: usize },

    #[error("models are defined on different scenarios")]
    ScenarioMismatch,

    #[error("mixing weight {0} outside [0, 1]")]
    MixingWeight(f64),

    #[error("unknown fixture {0:?} (expected table1a, table1b or table1c)")]
    UnknownFixture(String),

    #[error("invalid empirical model: {0}")]
    InvalidModel(String),

    #[error("invalid global distribution: {0}")]
    InvalidDistribution(String),

    #[error("{name} = {value} outside {range}")]
    AngleRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("state is not normalised (norm {0})")]
    NotNormalised(f64),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("expected {expected} qubits, found {found}")]
    QubitCount { expected: usize, found: usize },

    #[error("simplex stopped after {0} iterations without reaching an optimum")]
    IterationLimit(usize),

    #[error("solver returned {0:?}")]
    Solver(LpStatus),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures caused by solver limits or size guards rather than bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::IterationLimit(_) | Error::TooManyAssignments { .. }
        )
    }
}

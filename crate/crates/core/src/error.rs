use thiserror::Error;

use crate::agenda::SolveReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid agenda: {0}")]
    InvalidAgenda(String),

    #[error("degenerate agenda: {0}")]
    DegenerateAgenda(String),

    #[error("world index {world} out of range (agenda has {worlds} worlds)")]
    InvalidWorld { world: usize, worlds: usize },

    #[error("shape mismatch: expected {expected} values, found {found}")]
    Shape { expected: usize, found: usize },

    #[error("invalid credence: {0}")]
    InvalidCredence(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("operation requires a partition agenda")]
    NotPartition,

    /// Multiplicative normalization needs a positive total credence.
    #[error("degenerate credence: all values are zero")]
    DegenerateCredence,

    #[error("degenerate profile: {0}")]
    DegenerateProfile(String),

    #[error("value {0} lies outside the range of the generator derivative")]
    Range(f64),

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("solver failed: {message}")]
    Solver {
        message: String,
        /// Best iterate reached before giving up, when one exists.
        best: Option<Box<SolveReport>>,
    },

    #[error("grid too large: {0}")]
    Scale(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Geometric pooling cannot be normalized on an agenda that is not a
    /// partition: the normalized weighted geometric mean of a disjunction is
    /// not the sum of the normalized means of its disjuncts, and no other
    /// normalization is determined by the pooling rule.
    #[error(
        "geometric pooling with normalization is undefined on a non-partition agenda: \
         the normalized pooled credence in a disjunction is not the sum of the normalized \
         pooled credences in its disjuncts, so there is no canonical way to normalize"
    )]
    GeneralNormalization,
}

impl Error {
    pub(crate) fn solver(message: impl Into<String>) -> Self {
        Error::Solver { message: message.into(), best: None }
    }

    pub(crate) fn solver_with_best(message: impl Into<String>, best: SolveReport) -> Self {
        Error::Solver { message: message.into(), best: Some(Box::new(best)) }
    }
}

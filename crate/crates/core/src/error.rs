use thiserror::Error;

/// A computation needed a state above the cutoff of a truncated space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruncationBreach {
    /// Weight of the unknown state that was required.
    pub weight: i64,
    pub cutoff: i64,
}

impl std::fmt::Display for TruncationBreach {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "truncation breach: weight {} exceeds cutoff {}",
            self.weight, self.cutoff
        )
    }
}

impl std::error::Error for TruncationBreach {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid rational literal `{0}`")]
    BadScalar(String),

    #[error("subspace is not contained in the ambient span")]
    SubspaceNotContained,

    #[error("weight rule violated by {entry}: expected weight {expected}, found {found}")]
    WeightRuleViolation {
        entry: String,
        expected: i64,
        found: i64,
    },

    #[error("no vacuum vector given")]
    NoVacuum,

    #[error("vacuum has weight {0}, expected 0")]
    VacuumWrongWeight(i64),

    #[error(transparent)]
    TruncationBreach(#[from] TruncationBreach),

    #[error("creation property fails; translation operator undefined")]
    CreationFailed,

    #[error("map does not kill the vacuum")]
    VacuumNotKilled,

    #[error("cochain is not a cocycle")]
    NotACocycle,

    #[error("extension does not pass verification")]
    NotVerified,

    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("multiplication table is not associative at {0}")]
    NotAssociative(String),

    #[error("multiplication table is not commutative at {0}")]
    NotCommutative(String),

    #[error("unit element does not act as identity at {0}")]
    NotUnital(String),

    #[error("derivation fails the Leibniz rule at {0}")]
    NotLeibniz(String),

    #[error("weight mismatch: {0}")]
    WeightMismatch(String),

    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate basis label `{0}`")]
    DuplicateLabel(String),

    #[error("invalid basis label `{0}`")]
    InvalidLabel(String),

    #[error("cutoff {cutoff} is below the maximal weight {max_weight} of an exact-tier space")]
    CutoffBelowMaxWeight { cutoff: i64, max_weight: i64 },

    #[error("weight {weight} lies outside [{min}, {cutoff}]")]
    WeightOutOfRange { weight: i64, min: i64, cutoff: i64 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },

    #[error("constructed equivalence failed verification: {0}")]
    EquivalenceCheckFailed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Malformed or inconsistent input, as opposed to a mathematical failure
    /// of well-formed input.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::TruncationBreach(_)
                | Error::CreationFailed
                | Error::VacuumNotKilled
                | Error::NotACocycle
                | Error::NotVerified
                | Error::NotAssociative(_)
                | Error::NotCommutative(_)
                | Error::NotUnital(_)
                | Error::NotLeibniz(_)
                | Error::EquivalenceCheckFailed(_)
        )
    }
}

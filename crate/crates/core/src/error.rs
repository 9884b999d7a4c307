use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed tables, dangling references, duplicate labels and the like.
    #[error("structural input error: {0}")]
    Structural(String),

    /// An operation was called outside its precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// The input violates an axiom that the operation depends on.
    #[error("axiom violation [{axiom}]: {detail}")]
    AxiomViolation { axiom: String, detail: String },

    /// A result failed its own post-check. Indicates a bug or an inconsistent fixture.
    #[error("internal invariant failed: {0}")]
    Internal(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid operator-valued distribution, {condition} fails: {detail}")]
    InvalidPovm {
        condition: PovmCondition,
        detail: String,
    },

    #[error("construction failed: {identity} (residual {residual:.3e})")]
    Construction { identity: String, residual: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// The three defining conditions of an operator-valued probability distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PovmCondition {
    Positivity,
    Additivity,
    Normalization,
}

impl PovmCondition {
    pub fn index(self) -> u8 {
        match self {
            PovmCondition::Positivity => 1,
            PovmCondition::Additivity => 2,
            PovmCondition::Normalization => 3,
        }
    }
}

impl std::fmt::Display for PovmCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PovmCondition::Positivity => write!(f, "condition 1 (positivity: (m(B)η,η) ≥ 0)"),
            PovmCondition::Additivity => write!(f, "condition 2 (additivity: m(ΣB_i) = Σm(B_i))"),
            PovmCondition::Normalization => write!(f, "condition 3 (normalization: m(E)=I)"),
        }
    }
}

impl Error {
    pub(crate) fn axiom(axiom: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::AxiomViolation {
            axiom: axiom.into(),
            detail: detail.into(),
        }
    }

    /// Process exit code under the CLI contract: 2 for input errors, 1 for semantic failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Structural(_) | Error::Parse(_) | Error::Io(_) => 2,
            _ => 1,
        }
    }
}

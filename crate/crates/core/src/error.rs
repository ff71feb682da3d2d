use thiserror::Error;

/// Errors produced anywhere in the library.
///
/// Variants map one-to-one onto the failure modes named by the public
/// operations; the CLI turns them into exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precision exhausted at {bits} bits: {context}")]
    PrecisionExhausted { bits: u32, context: String },

    #[error("division by zero")]
    DivisionByZero,

    #[error("degree guard exceeded: degree {degree} > cap {cap}")]
    DegreeGuardExceeded { degree: usize, cap: usize },

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("multiplicative dependence detected: relation {0:?}")]
    DependenceDetected(Vec<i64>),

    #[error("direction degenerate: {0}")]
    DirectionDegenerate(String),

    #[error("specialization annihilates the polynomial")]
    SpecializationAnnihilates,

    #[error("boundary zero suspected near {0}")]
    BoundaryZeroSuspected(String),

    #[error("enumeration guard exceeded: {count} candidates > guard {guard}")]
    GuardExceeded { count: u128, guard: u128 },

    #[error("invalid problem: {}", .0.join("; "))]
    InvalidProblem(Vec<String>),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn precision(bits: u32, context: impl Into<String>) -> Self {
        Error::PrecisionExhausted {
            bits,
            context: context.into(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

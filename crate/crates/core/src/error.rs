use thiserror::Error;

use crate::algebra::ExponentVec;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("substituted series {index} has a nonzero constant term")]
    ValuationTooLow { index: usize },

    #[error("degree {degree} is outside the truncation range 0..={trunc}")]
    DegreeOutOfRange { degree: usize, trunc: usize },

    #[error("requested truncation {requested} exceeds what the operands determine ({available})")]
    TruncationBudget { requested: usize, available: usize },

    #[error("variable index {index} out of range for {nvars} variables")]
    BadVariable { index: usize, nvars: usize },

    #[error("resonance enumeration needs exact rational eigenvalues")]
    NonRationalEigenvalues,

    #[error("sign could not be decided at the precision cap of {bits} bits")]
    PrecisionExhausted { bits: u32 },

    #[error("matrix is not in Jordan normal form: {0}")]
    NotJordanForm(String),

    #[error("zero divisor at monomial {0}")]
    ZeroDivisor(ExponentVec),

    #[error("right-hand side contains a monomial outside the operator space: {0}")]
    BadRhs(ExponentVec),

    #[error("tail eigenvalues are resonant at {0}")]
    ResonantTail(ExponentVec),

    #[error("vector field is not straightened (nonzero terms on y = 0)")]
    NotStraightened,

    #[error("eigenvalues are resonant at {0}; nonintegrability does not apply")]
    ResonantSpectrum(ExponentVec),

    #[error("tail matrix B is singular")]
    SingularB,

    #[error("singular curve is not invariant: component {component} keeps a term of degree {degree} on v = 0")]
    CurveNotInvariant { component: usize, degree: usize },

    #[error("singular point is isolated: f1 restricted to the curve has a nonzero term at degree {degree}")]
    IsolatedSingularPoint { degree: usize },

    #[error("Liouville schedule index {0} cannot be materialized")]
    ScheduleOverflow(usize),

    #[error("trajectory left the trust radius at t = {time}")]
    RadiusExceeded { time: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("line {line}: nonlinear term of degree {degree} (must be at least 2)")]
    ValuationError { line: usize, degree: usize },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Mathematical obstructions, as opposed to usage or input errors.
    pub fn is_obstruction(&self) -> bool {
        matches!(
            self,
            Error::ZeroDivisor(_)
                | Error::ResonantTail(_)
                | Error::NotStraightened
                | Error::ResonantSpectrum(_)
                | Error::SingularB
                | Error::CurveNotInvariant { .. }
                | Error::IsolatedSingularPoint { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

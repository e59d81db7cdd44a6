use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A representation label violates its parity or range constraint.
    #[error("invalid label: {0}")]
    InvalidLabel(String),

    /// Input outside the domain of an operation (non-unitary point, non-skew tangent, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Fractional-linear action evaluated where `CZ + D` is (nearly) singular.
    #[error("near-singular action: cond(CZ+D) = {cond:.3e} exceeds {limit:.1e}")]
    NearSingular { cond: f64, limit: f64 },

    /// Unitarity of an action output drifted beyond what re-projection may hide.
    #[error("unitarity drift {0:.3e} too large")]
    UnitarityDrift(f64),

    /// A matrix does not satisfy the pairing condition of its realization.
    #[error("not a group element: {0}")]
    NotInGroup(String),

    /// Grades of a wedge product add past the top degree.
    #[error("grade overflow: {0} + {1} > 4")]
    GradeOverflow(usize, usize),

    /// Operation requires grades that do not match.
    #[error("grade mismatch: expected {expected}, got {got}")]
    GradeMismatch { expected: usize, got: usize },

    /// Exact exterior derivative requested on a black-box field.
    #[error("field has no exact derivative data; finite differences required")]
    NeedsFiniteDifferences,

    /// A pre-condition of a pairing or classification was violated.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A value turned out NaN or infinite during evaluation.
    #[error("non-finite value during evaluation: {0}")]
    NonFinite(String),

    /// Plane-wave constraint system not satisfied.
    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

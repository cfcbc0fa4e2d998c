use thiserror::Error;

/// Errors produced anywhere in the workbench.
///
/// Variants split into two families: *failed checks* (an exact identity or
/// consistency condition that should hold did not) and *input problems*
/// (malformed files, inapplicable operations, caps too small). The CLI maps
/// the first family to exit code 1 and the second to exit code 2.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("inner product in degree {degree} is not positive definite (pivot {pivot} at index {index})")]
    InnerNotPositiveDefinite {
        degree: usize,
        index: usize,
        pivot: String,
    },

    #[error("degree {degree} out of range (complex has degrees 0..={max})")]
    DegreeOutOfRange { degree: usize, max: usize },

    #[error("invalid complex: {check} fails at basis element {witness}")]
    InvalidComplex { check: String, witness: String },

    #[error("operator identity {identity} failed at {witness}")]
    IdentityFailed { identity: String, witness: String },

    #[error("the two computations of d_HB disagree on harmonic generator {witness}")]
    TheoremMismatch { witness: String },

    #[error("minimal model differential is not zero at cap {cap}; operation needs the cohomology extension of the fibre")]
    NotCEF { cap: usize },

    #[error("operation requires an abelian datum (every polynomial generator of degree 2)")]
    NotAbelian,

    #[error("product structure unavailable: {reason}")]
    ProductUnavailable { reason: String },

    #[error("no gamma witness inside the truncation window (raise the cap)")]
    NoWitnessInWindow,

    #[error("Euler characteristic mismatch: multiplicities sum to {got}, expected n + 1 = {expected}")]
    EulerCharacteristicMismatch { expected: usize, got: usize },

    #[error("moment values must be pairwise distinct for isolated-fixed-point operations")]
    RepeatedMomentValues,

    #[error("equivariant Euler class missing or zero at fixed point {component}")]
    MissingEuler { component: usize },

    #[error("integration formula gives inconsistent volumes: [{values}]")]
    InconsistentFixedPointData { values: String },

    #[error("weights must satisfy 0 < a < b, got a = {a}, b = {b}")]
    InvalidWeights { a: i64, b: i64 },

    #[error("basis element {label} in degree {degree} is not harmonic")]
    NotHarmonic { label: String, degree: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid cap {cap}: {reason}")]
    InvalidCap { cap: usize, reason: String },

    #[error("dimension mismatch: {0}")]
    Shape(String),
}

impl Error {
    /// True for variants that represent a failed mathematical check rather
    /// than an unusable input.
    pub fn is_failed_check(&self) -> bool {
        matches!(
            self,
            Error::InvalidComplex { .. }
                | Error::IdentityFailed { .. }
                | Error::TheoremMismatch { .. }
                | Error::InconsistentFixedPointData { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

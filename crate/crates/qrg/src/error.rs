use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus {0}: not a prime power >= 2")]
    InvalidModulus(u32),

    #[error("invalid field order {0}: not a prime power >= 2")]
    InvalidFieldOrder(u32),

    #[error("polynomial degree {found} does not match extension degree {expected}")]
    DegreeMismatch { expected: u32, found: u32 },

    #[error("polynomial is reducible over Z_{p}")]
    ReduciblePolynomial { p: u32 },

    #[error("polynomial coefficient {coeff} out of range for Z_{p}")]
    CoefficientOutOfRange { coeff: u32, p: u32 },

    #[error("elements belong to different rings")]
    RingMismatch,

    #[error("coordinate {value} out of range for component {component}")]
    CoordinateOutOfRange { component: usize, value: u32 },

    #[error("expected {expected} coordinates, got {found}")]
    CoordinateCount { expected: usize, found: usize },

    #[error("ring expression error at byte {position}: {message}")]
    ParseRing { position: usize, message: String },

    #[error("{0} is not prime")]
    NotPrime(u32),

    #[error("dimension must be at least 2")]
    DimensionTooSmall,

    #[error("operators belong to different factor specifications")]
    FactorSpecMismatch,

    #[error("operation requires factor primes {expected:?}, got {found:?}")]
    WrongFactors { expected: Vec<u32>, found: Vec<u32> },

    #[error("dimension {dim} exceeds the configured bound {bound}")]
    DimensionBound { dim: u32, bound: u32 },

    #[error("vector is not admissible")]
    NotAdmissible,

    #[error("no built-in ring for dimension {0}; supply one explicitly")]
    NoDefaultRing(u32),
}

use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the numerical routines of this crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("at least {required} samples are required, got {got}")]
    TooFewSamples { required: usize, got: usize },

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("point {point} lies within {tol:e} of the sampled boundary polygon")]
    AmbiguousBoundary { point: Complex64, tol: f64 },

    #[error("|z| = {modulus} lies outside the closed unit disc")]
    OutsideDisc { modulus: f64 },

    #[error("point {0} is not in the closed domain")]
    NotInClosure(Complex64),

    #[error("Newton inversion failed to converge for {0} from every seed")]
    NoConvergence(Complex64),

    #[error("evaluation overflowed at z = {0}")]
    EvaluationOverflow(Complex64),

    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("quadrature unstable: doubling nodes changed coefficient {index} by {change:e}")]
    QuadratureUnstable { index: usize, change: f64 },

    #[error("orthonormal basis drifted by {drift:e} at degree {degree}")]
    IllConditioned { degree: usize, drift: f64 },

    #[error("{samples} boundary samples are insufficient for degree {degree} (need {required})")]
    InsufficientSamples {
        samples: usize,
        degree: usize,
        required: usize,
    },

    #[error("Taylor truncation term {truncation:e} exceeds the magnitude bound {bound:e}; increase the degree")]
    TruncationDominates { truncation: f64, bound: f64 },

    #[error("domain validation failed: {0}")]
    DomainRejected(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

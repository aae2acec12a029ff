use thiserror::Error;

/// Errors raised by the spectral and finite element routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid opening angle {0} rad (expected 0 < omega <= 2 pi)")]
    InvalidAngle(f64),

    #[error("invalid cone half-opening {0} rad (expected 0 < omega < pi)")]
    InvalidCone(f64),

    #[error("spectral parameter {0} outside [0, 1]")]
    InvalidSigma(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("regularity undefined, sigma = {sigma} lies in the essential spectrum [{lo}, {hi}]")]
    SigmaInEssentialSpectrum { sigma: f64, lo: f64, hi: f64 },

    #[error("non-generic lambda {0}: sin(lambda omega) vanishes")]
    NonGenericLambda(String),

    #[error("argument {0} outside the domain (-1, 1)")]
    Domain(f64),

    #[error("hypergeometric series did not converge after {0} terms")]
    SeriesNonConvergence(usize),

    #[error("contour passes through or near a zero")]
    ContourHitsZero,

    #[error("root isolation unresolved: {0}")]
    Unresolved(String),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("invalid finite element spaces: {0}")]
    InvalidSpaces(String),

    #[error("factorization failed: matrix not positive definite at pivot {0}")]
    NotPositiveDefinite(usize),

    #[error("eigensolver did not converge: {0}")]
    NonConvergence(String),

    #[error("sample point {0:?} outside the mesh")]
    OutsideMesh(Vec<f64>),
}

pub type Result<T> = std::result::Result<T, Error>;

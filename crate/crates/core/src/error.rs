use thiserror::Error;

use crate::covariance::MembershipReport;

/// Errors raised by the library. Domain rejections (a matrix that is not a
/// valid covariance, a state that is not pure, ...) are distinguished from
/// malformed input so the CLI can map them onto different exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("mode count must be at least 1 (got {0})")]
    InvalidModeCount(usize),

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix dimension {0} is odd; phase-space matrices are 2n x 2n")]
    OddDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is not strictly positive definite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("matrix is not symplectic (residual {residual:e})")]
    NotSymplectic { residual: f64 },

    #[error("covariance violates the uncertainty relation 2S - iJ >= 0 (min eigenvalue {})", .0.min_eig_complex)]
    NotInKn(Box<MembershipReport>),

    #[error("diagonal entry {index} is {value}, below the required lower bound 1")]
    DiagonalBelowOne { index: usize, value: f64 },

    #[error("state is mixed: largest symplectic eigenvalue excess over 1/2 is {max_excess:e}")]
    MixedState { max_excess: f64 },

    #[error("phase must have unit modulus (|phase| = {modulus})")]
    NonUnitPhase { modulus: f64 },

    #[error("mode subset is empty")]
    EmptySubset,

    #[error("mode index {index} out of range for {modes} modes")]
    ModeOutOfRange { index: usize, modes: usize },

    #[error("mode index {0} listed twice")]
    DuplicateMode(usize),

    #[error("oracle trace {trace} deviates from 1 by more than 1e-3; raise the cutoff")]
    OracleTrace { trace: f64 },

    #[error("squeezing parameter r = {r} is outside the validated range |r| <= {max}")]
    SqueezeOutOfRange { r: f64, max: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True when the input was well formed but rejected on mathematical grounds.
    pub fn is_domain_rejection(&self) -> bool {
        matches!(
            self,
            Error::NotSymmetric { .. }
                | Error::NotPositiveDefinite { .. }
                | Error::NotSymplectic { .. }
                | Error::NotInKn(_)
                | Error::DiagonalBelowOne { .. }
                | Error::MixedState { .. }
                | Error::NonUnitPhase { .. }
                | Error::OracleTrace { .. }
                | Error::SqueezeOutOfRange { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

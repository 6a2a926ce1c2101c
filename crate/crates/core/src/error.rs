//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not invertible modulo {1}")]
    NonInvertible(u64, u64),

    #[error("modulus {0} is not prime")]
    NotPrime(u64),

    #[error("character mod {0} with index {1} is not primitive")]
    NotPrimitive(u64, u64),

    #[error("twist modulus {0} does not divide the Kloosterman modulus {1}")]
    TwistModulusMismatch(u64, u64),

    #[error("denominator polynomial vanishes everywhere on F_{0}")]
    DenominatorZeroEverywhere(u64),

    #[error("amplifier weight total {got} cannot reach threshold {needed}")]
    ThresholdUnreachable { got: f64, needed: f64 },

    #[error("exact integer overflow while computing coefficient {0}")]
    Overflow(usize),

    #[error("quadrature did not converge to {tol:e} within depth {depth}")]
    QuadratureNonConvergence { tol: f64, depth: u32 },

    #[error("Hurwitz zeta has a pole at s = 1")]
    PoleAtOne,

    #[error("stationary point {0} lies outside the window support")]
    StationaryPointOutsideSupport(f64),

    #[error("{0} and {1} are not coprime")]
    NotCoprime(u64, u64),

    #[error("degenerate parameter tuple: {0}")]
    ParameterDegeneracy(String),

    #[error("coefficient table has {have} entries but {need} are required")]
    TableTooSmall { have: usize, need: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("corrupt coefficient cache: {0}")]
    CorruptCache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid recurrence: {0}")]
    InvalidLrs(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix shape mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix moduli differ")]
    ModulusMismatch,

    #[error("residue {value} is not reduced modulo {modulus}")]
    UnreducedResidue { value: BigUint, modulus: BigUint },

    #[error("constant coefficient is zero; normalize the recurrence first")]
    ZeroConstantCoefficient,

    #[error("exact evaluation of index {index} exceeds the cap {cap}")]
    ExactCapExceeded { index: BigUint, cap: u64 },

    #[error(
        "all differences vanish modulo p^{nu} on disc (ell={ell}, z={z}, r={r}); precision too small"
    )]
    PrecisionExhausted {
        ell: u64,
        z: BigUint,
        r: u32,
        nu: u64,
    },

    #[error("no prime found after {attempts} attempts in bit range [{lo}, {hi}]")]
    PrimeSamplingFailed { attempts: u32, lo: u32, hi: u32 },
}

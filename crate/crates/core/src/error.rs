use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid string parameters: {0}")]
    InvalidParams(String),

    #[error("mode index 0 is not allowed here")]
    ZeroMode,

    #[error("basis dimension {dim} exceeds the cap of {cap} states")]
    BasisTooLarge { dim: usize, cap: usize },

    #[error("invalid basis request: {0}")]
    InvalidBasis(String),

    #[error("state {0} is not part of the basis")]
    StateNotInBasis(String),

    #[error("operator is not Hermitian (max |A - A^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("dimension {dim} exceeds the dense cap of {cap}")]
    DimensionOverCap { dim: usize, cap: usize },

    #[error("vector length {got} does not match operator dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("photon wavevector must be nonzero")]
    ZeroWavevector,

    #[error("polarization index must be 1 or 2, got {0}")]
    InvalidPolarization(u8),

    #[error("time step {dt:e} violates the stability guard dt < {limit:e}")]
    Unstable { dt: f64, limit: f64 },

    #[error("field became non-finite at t = {t}")]
    NonFinite { t: f64 },

    #[error("invalid field state: {0}")]
    InvalidField(String),

    #[error("history holds {have} samples, {need} are required")]
    InsufficientHistory { have: usize, need: usize },

    #[error("radiation-reaction kernel order {0} exceeds the supported maximum of 6")]
    KernelOrder(usize),

    #[error("failed to parse {what}: {message}")]
    Parse { what: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid spin: {0}")]
    InvalidSpin(String),

    #[error("site {site} out of range for a chain of {n} sites")]
    SiteOutOfRange { site: usize, n: usize },

    #[error("sector with 2*M = {two_m} is empty for N = {n}, 2s = {two_s}")]
    EmptySector { n: usize, two_s: u32, two_m: i64 },

    #[error("operator does not commute with total S^z (commutator norm {norm:.3e})")]
    NotBlockDiagonal { norm: f64 },

    #[error("operator is not Hermitian (max |A - A^dagger| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("integrator failed at t = {time:.6}: {reason}")]
    Integration { time: f64, reason: String },

    #[error("density matrix lost positivity at t = {time:.6}: min eigenvalue {min_eigenvalue:.3e}")]
    Positivity { time: f64, min_eigenvalue: f64 },

    #[error("mode {mode} is resonant with the boundary splitting (detuning {detuning:.3e})")]
    Resonance { mode: usize, detuning: f64 },

    #[error("{excluded} of {requested} realizations failed at grid value {point} (limit 1%): {first}")]
    TooManyFailures {
        point: f64,
        excluded: usize,
        requested: usize,
        first: String,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

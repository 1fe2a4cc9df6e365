use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precision cap of {cap} bits exceeded (requested {requested})")]
    PrecisionCapExceeded { requested: u64, cap: u64 },

    #[error("invalid theta: {0}")]
    InvalidTheta(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("k = {k} and l = {l} are not coprime")]
    NotCoprime { k: u64, l: u64 },

    #[error("n = {n} is below the threshold {threshold}")]
    BelowThreshold { n: u64, threshold: u64 },

    #[error("window of {len} values is too short (need at least {needed})")]
    WindowTooShort { len: usize, needed: usize },

    #[error("certificate violated at n = {n}")]
    CertificateViolated { n: u64 },

    #[error("series outside its convergence domain: |log theta| >= 2*pi*n")]
    ConvergenceDomain,

    #[error("gap outside {{1, 2}} at n = {n} (gap = {gap})")]
    GapOutOfRange { n: u64, gap: i64 },

    #[error("M({n}) is infinite")]
    InfiniteValue { n: u64 },

    #[error("value at n = {n} does not fit in 64 bits")]
    Overflow { n: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

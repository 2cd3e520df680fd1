use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad arguments or a malformed keyboard/distribution.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Tied variates kept producing zero-width spacings.
    #[error("degenerate sample: zero spacing after {attempts} attempts")]
    DegenerateSample { attempts: usize },

    /// The brute-force oracle cannot guarantee it sees every word above rank N.
    #[error("truncation unsafe: base value at rank {rank} does not exceed q1^{max_len}")]
    TruncationUnsafe { rank: usize, max_len: usize },

    /// A computation would exceed a configured size budget.
    #[error("resource limit: {what} (limit {limit}, requested {requested})")]
    Resource {
        what: &'static str,
        limit: u128,
        requested: u128,
    },

    /// Counting horizon beyond the cap; `estimate` is R0^t.
    #[error("counting horizon t={t} exceeds cap {cap} (about {estimate:.3e} words)")]
    CountCap { t: f64, cap: f64, estimate: f64 },

    #[error("exact count overflowed 128 bits")]
    CountOverflow,

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    /// A proven inequality failed numerically.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

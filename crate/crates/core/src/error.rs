use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("cannot parse Gaussian rational {0:?}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("singular system: {0}")]
    Singular(String),
    #[error("spectrum does not split over Q(i): {0}")]
    NotSplit(String),
    #[error("invalid spectral data: {0}")]
    InvalidInstance(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("search cap of {cap} exceeded")]
    CapExceeded { cap: u64 },
    #[error("not in unramified normal form: {0}")]
    Ramified(String),
}

pub type Result<T> = core::result::Result<T, Error>;

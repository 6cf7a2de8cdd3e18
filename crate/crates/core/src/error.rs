use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything the library can refuse to do.
///
/// Each variant maps to a stable machine-readable code (see [`Error::code`])
/// and, where there is one, a witness point (see [`Error::witness`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Domain(String),
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("scalar mode mismatch")]
    ModeMismatch,
    #[error("points must be distinct, got {0} twice")]
    SamePoint(u64),
    #[error("window {window} is smaller than modulus {n}")]
    WindowTooSmall { window: u64, n: u64 },
    #[error("cover misses point {witness}")]
    NotACover { witness: u64 },
    #[error("cover element {index} is not open")]
    NotOpen { index: usize },
    #[error("value at {index} is not a non-negative real")]
    NotPositive { index: u64 },
    #[error("indicator of accumulation point {index} is not continuous")]
    NotContinuous { index: u64 },
    #[error("value at {index} has no exact rational root")]
    Irrational { index: u64 },
    #[error("no prescribed values and no fill")]
    EmptyDomain,
    #[error("fill modulus exceeds the largest prescribed modulus")]
    FillTooLarge,
    #[error("vector is not normalized (l1 norm {norm})")]
    Normalize { norm: String },
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::ModulusMismatch { .. } => "modulus_mismatch",
            Error::ModeMismatch => "mode_mismatch",
            Error::SamePoint(_) => "same_point",
            Error::WindowTooSmall { .. } => "window_too_small",
            Error::NotACover { .. } => "not_a_cover",
            Error::NotOpen { .. } => "not_open",
            Error::NotPositive { .. } => "not_positive",
            Error::NotContinuous { .. } => "not_continuous",
            Error::Irrational { .. } => "irrational",
            Error::EmptyDomain => "empty_domain",
            Error::FillTooLarge => "fill_too_large",
            Error::Normalize { .. } => "normalize",
        }
    }

    pub fn witness(&self) -> Option<u64> {
        match *self {
            Error::SamePoint(x) => Some(x),
            Error::NotACover { witness } => Some(witness),
            Error::NotOpen { index } => Some(index as u64),
            Error::NotPositive { index }
            | Error::NotContinuous { index }
            | Error::Irrational { index } => Some(index),
            _ => None,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub(crate) fn same_modulus(left: u64, right: u64) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::ModulusMismatch { left, right })
    }
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: String,
        reason: &'static str,
    },

    #[error("relative weight {0} outside (0, 1]")]
    WeightDomain(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("predictions and outcomes must be 0 or 1, got {0}")]
    NotBinary(u8),

    #[error("length mismatch: horizon is {horizon}, got {got}")]
    HorizonMismatch { horizon: usize, got: usize },

    #[error("invalid block form: {0}")]
    InvalidBlocks(String),

    #[error("{what} limited to {limit}, requested {requested}")]
    Guard {
        what: &'static str,
        limit: u64,
        requested: u64,
    },

    #[error("the online dynamic program requires the absolute loss")]
    UnsupportedLoss,

    #[error("value table does not match the model parameters")]
    TableMismatch,

    #[error("cannot parse policy: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: impl ToString, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value: value.to_string(),
            reason,
        }
    }

    pub fn is_guard(&self) -> bool {
        matches!(self, Error::Guard { .. })
    }
}

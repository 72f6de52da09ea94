use thiserror::Error;

/// Errors produced across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature did not converge: last two estimates {previous} and {current} differ by more than {tolerance}")]
    QuadratureNonConvergence {
        previous: f64,
        current: f64,
        tolerance: f64,
    },

    #[error("realization has {got} points, model needs at least {need}")]
    TooFewPoints { got: usize, need: usize },

    #[error("goodness-of-fit needs at least 2 bins after pooling, got {0}")]
    TooFewBins(usize),

    #[error("sample too small: got {got}, need at least {need}")]
    SampleTooSmall { got: usize, need: usize },

    #[error("enumeration horizon {0} exceeds the cap of {cap}", cap = crate::exact::MAX_ENUMERATION_HORIZON)]
    HorizonTooLarge(usize),

    #[error("model validation failed: {0}")]
    InvalidModel(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

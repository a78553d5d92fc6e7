use thiserror::Error;

/// Unified error type. Every message is prefixed with the module that
/// raised it so CLI output points at the failing stage.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{module}: {message}")]
    InvalidArgument {
        module: &'static str,
        message: String,
    },

    /// Sample-wise combination of series that do not share dt/t0/length/unit.
    #[error("{module}: series misaligned: {message}")]
    Alignment {
        module: &'static str,
        message: String,
    },

    /// Input file or config violates the documented schema.
    #[error("io: {message}")]
    Format { message: String },

    #[error("beam: below-ground length h is required: {message}")]
    MissingGeometry { message: String },

    /// Numerical failure (singular system, divergence, non-finite result).
    #[error("{module}: numeric failure: {message}")]
    Numeric {
        module: &'static str,
        message: String,
    },

    /// Both accelerometer axes read zero; the gravity direction is lost.
    #[error("inclination: undefined orientation (ax = ay = 0) at sample {index}")]
    UndefinedOrientation { index: usize },

    /// Rotation pair outside the single-load Euler-Bernoulli regime.
    #[error("beam: model violation: {message}")]
    ModelViolation { message: String },

    /// Error metric against a zero reference.
    #[error("fusion: undefined metric: {message}")]
    UndefinedMetric { message: String },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(module: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidArgument {
            module,
            message: message.into(),
        }
    }

    pub fn misaligned(module: &'static str, message: impl Into<String>) -> Self {
        Error::Alignment {
            module,
            message: message.into(),
        }
    }

    pub fn format(message: impl Into<String>) -> Self {
        Error::Format {
            message: message.into(),
        }
    }

    pub fn numeric(module: &'static str, message: impl Into<String>) -> Self {
        Error::Numeric {
            module,
            message: message.into(),
        }
    }

    /// Process exit code the CLI maps this error to: 2 for usage/format
    /// problems, 3 for numeric/model failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument { .. }
            | Error::Alignment { .. }
            | Error::Format { .. }
            | Error::MissingGeometry { .. }
            | Error::Io(_) => 2,
            Error::Numeric { .. }
            | Error::UndefinedOrientation { .. }
            | Error::ModelViolation { .. }
            | Error::UndefinedMetric { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

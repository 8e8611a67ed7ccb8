use thiserror::Error;

/// Errors produced by the optimizer, the problem definitions and the I/O helpers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("invalid bounds: {0}")]
    Bounds(String),

    #[error("invalid fitness (NaN) at position {position:?}")]
    InvalidFitness { position: Vec<f64> },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("budget exhausted: {used} of {max} evaluations used, {needed} more needed")]
    Budget { used: usize, max: usize, needed: usize },

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("transform error: {0}")]
    Transform(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("format error at byte {offset}: {message}")]
    Format { offset: usize, message: String },

    #[error("unsupported image variant {0:?}")]
    UnsupportedVariant(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short stable identifier of the variant, used in machine-readable output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Dimension { .. } => "dimension",
            Error::Bounds(_) => "bounds",
            Error::InvalidFitness { .. } => "invalid_fitness",
            Error::Parameter(_) => "parameter",
            Error::Budget { .. } => "budget",
            Error::Contract(_) => "contract",
            Error::Transform(_) => "transform",
            Error::Input(_) => "input",
            Error::Format { .. } => "format",
            Error::UnsupportedVariant(_) => "unsupported_variant",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// The fringe sideband is too weak to extract a phase from.
    #[error("low fringe visibility: sideband SNR {snr:.3} below threshold {threshold}")]
    LowVisibility { snr: f64, threshold: f64 },

    /// The sideband filter would overlap the zero-delay lobe or leave the time window.
    #[error("filter collision: {0}")]
    FilterCollision(String),

    #[error("delay calibration failed: {0}")]
    CalibrationFailure(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Process exit code for the command-line front end.
    ///
    /// 2: configuration/argument validation, 3: reconstruction quality,
    /// 4: I/O and parsing.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::GridMismatch(_) | Error::Config(_) => 2,
            Error::Degenerate(_)
            | Error::LowVisibility { .. }
            | Error::FilterCollision(_)
            | Error::CalibrationFailure(_) => 3,
            Error::Parse { .. } | Error::Schema(_) | Error::Io(_) | Error::Json(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

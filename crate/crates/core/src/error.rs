use thiserror::Error;

/// Errors produced across the toolkit.
///
/// The CLI maps the variants onto exit codes: `Input` → 2, `Capacity` → 3,
/// `Invariant` → 4. I/O and serialization failures are reported as input
/// errors.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("capacity exceeded: {what} would need dimension {dim} (limit {limit})")]
    Capacity { what: String, dim: u128, limit: u128 },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

impl Error {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Capacity { .. } => 3,
            Error::Invariant(_) => 4,
            _ => 2,
        }
    }
}

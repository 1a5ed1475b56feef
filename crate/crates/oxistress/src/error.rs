use std::path::PathBuf;

/// Errors produced by the modeling, simulation, and I/O layers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An input fell outside an operation's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter set or run specification failed validation.
    #[error("configuration error: {0}")]
    Config(String),

    /// Config-file parse failure, with the offending line number.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// The survival curve never crosses zero (e.g. zero effectiveness).
    #[error("no extinction: {0}")]
    NoExtinction(String),

    /// The integrator produced a non-finite state.
    #[error("numeric blow-up at step {step}")]
    NumericBlowUp { step: usize },

    /// Stepped past the end of the simulated day.
    #[error("end of day: minute {0} is past 1439")]
    EndOfDay(u32),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A result did not match the schema it was asked to serialize under.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

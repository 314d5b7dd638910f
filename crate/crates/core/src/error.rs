use std::path::PathBuf;

/// Errors raised anywhere in the laboratory.
///
/// The variants split into two families that the CLI maps onto distinct exit
/// codes: configuration problems (bad parameters, malformed input files) and
/// contract violations detected while a simulation is running.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("config error in `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("mean {value} of arm {arm} at t={t} lies outside [0, 1]")]
    MeanOutOfRange { arm: usize, t: u64, value: f64 },

    #[error("time step {t} outside horizon [1, {horizon}]")]
    TimeOutOfRange { t: u64, horizon: u64 },

    #[error("arm {arm} outside [0, {arms})")]
    ArmOutOfRange { arm: usize, arms: usize },

    #[error("reward {0} outside [0, 1]")]
    RewardOutOfRange(f64),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("instance too large for brute-force enumeration: {0}")]
    TooLarge(String),

    #[error("malformed mean table {path}: {reason}")]
    Table { path: PathBuf, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by the user's input rather than by a run.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::Config { .. }
                | Error::MeanOutOfRange { .. }
                | Error::TooLarge(_)
                | Error::Table { .. }
                | Error::Json { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

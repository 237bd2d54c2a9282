use std::path::PathBuf;

/// Failures surfaced by the command-line tool, each tied to an exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("cannot access {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Invariant(_) => 3,
            CliError::NotApplicable(_) => 4,
        }
    }
}

impl From<witnesskit::Error> for CliError {
    fn from(e: witnesskit::Error) -> Self {
        use witnesskit::Error as E;
        let msg = e.to_string();
        match e {
            E::NotApplicable(s) => CliError::NotApplicable(s),
            E::NotHermitian { .. } | E::NotPositive { .. } | E::BadTrace { .. } | E::NotNormalized { .. } => {
                CliError::Invariant(msg)
            }
            E::NonQubitLayout | E::NoWitness(_) | E::RequiresFullRank { .. } => {
                CliError::NotApplicable(msg)
            }
            _ => CliError::Usage(msg),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

use std::fmt;
use std::path::Path;

/// Failure of a CLI operation, classified by exit code.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    /// Bad flags or an invalid config. Exit code 1.
    #[error("usage: {0}")]
    Usage(String),
    /// IO or a session that could not run. Exit code 2.
    #[error("error: {0}")]
    Runtime(String),
    /// A file failed verification, or an authentication was rejected. Exit code 3.
    #[error("verification failed: {0}")]
    Integrity(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Runtime(_) => 2,
            CliError::Integrity(_) => 3,
        }
    }

    pub fn usage(msg: impl fmt::Display) -> Self {
        CliError::Usage(msg.to_string())
    }

    pub fn runtime(msg: impl fmt::Display) -> Self {
        CliError::Runtime(msg.to_string())
    }

    pub fn integrity(msg: impl fmt::Display) -> Self {
        CliError::Integrity(msg.to_string())
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Runtime(format!("{}: {err}", path.display()))
    }
}

impl From<przk_bind_core::simulator::SimError> for CliError {
    fn from(e: przk_bind_core::simulator::SimError) -> Self {
        use przk_bind_core::simulator::SimError;
        match e {
            SimError::Config(c) => CliError::Usage(format!("invalid config: {c}")),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

//! Library side of the `fl` binary: the file format and the command bodies.

pub mod commands;
pub mod format;

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    /// An attack ran and did not recover anything.
    pub const ATTACK_FAILED: u8 = 1;
    pub const PARAMS: u8 = 2;
    pub const IO: u8 = 3;
    pub const DECRYPTION: u8 = 4;
    pub const MALFORMED: u8 = 5;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Params(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("decryption failed")]
    Decryption,
    #[error("{0}")]
    Malformed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Params(_) => exit::PARAMS,
            CliError::Io { .. } => exit::IO,
            CliError::Decryption => exit::DECRYPTION,
            CliError::Malformed(_) => exit::MALFORMED,
        }
    }
}

impl From<format::Malformed> for CliError {
    fn from(m: format::Malformed) -> Self {
        CliError::Malformed(m.0)
    }
}

use std::process::ExitCode;

use thiserror::Error;

/// Exit status of every outcome. Usage errors come from the argument parser
/// and exit with 2.
pub mod exit {
    pub const OK: u8 = 0;
    pub const CHECK_FAILED: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const IO: u8 = 3;
    pub const PARSE: u8 = 4;
    pub const COMMUTATION: u8 = 5;
    pub const INVALID_KAPPA: u8 = 6;
    pub const INPUT: u8 = 7;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("io error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("matrices do not commute: {0}")]
    Commutation(String),
    #[error("{0}")]
    InvalidKappa(String),
    #[error("invalid input: {0}")]
    Input(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => exit::IO,
            CliError::Parse(_) => exit::PARSE,
            CliError::Commutation(_) => exit::COMMUTATION,
            CliError::InvalidKappa(_) => exit::INVALID_KAPPA,
            CliError::Input(_) => exit::INPUT,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }
}

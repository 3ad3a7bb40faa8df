use std::fmt;

/// A failed command: the process exit code and a message for stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

pub const EXIT_INPUT: u8 = 1;
pub const EXIT_NUMERICAL: u8 = 2;
pub const EXIT_VERIFY: u8 = 3;

impl CliError {
    pub fn input(msg: impl fmt::Display) -> Self {
        Self {
            code: EXIT_INPUT,
            message: msg.to_string(),
        }
    }

    pub fn numerical(msg: impl fmt::Display) -> Self {
        Self {
            code: EXIT_NUMERICAL,
            message: msg.to_string(),
        }
    }

    pub fn verify(msg: impl fmt::Display) -> Self {
        Self {
            code: EXIT_VERIFY,
            message: msg.to_string(),
        }
    }
}

/// Library errors split into bad input (exit 1) and numerical trouble (exit 2).
impl From<idmps::Error> for CliError {
    fn from(e: idmps::Error) -> Self {
        use idmps::Error::*;
        match e {
            ConvergenceFailure { .. } | ZeroState | InvalidSpectrum => CliError::numerical(e),
            _ => CliError::input(e),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

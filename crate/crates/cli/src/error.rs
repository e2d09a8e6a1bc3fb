use std::fmt;

/// An error with the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    message: String,
}

impl CliError {
    /// Bad input data, arguments or files: exit 1.
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }

    /// Anything that is not the caller's fault: exit 2.
    pub fn internal(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

// Library errors come from the data or the parameters handed to it.
impl From<scimap::Error> for CliError {
    fn from(e: scimap::Error) -> Self {
        CliError::input(e.to_string())
    }
}

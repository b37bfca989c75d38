use std::process::ExitCode;

/// Harness failures, each with its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("i/o failure: {0}")]
    Io(String),
    #[error(transparent)]
    Core(superpose::Error),
}

impl HarnessError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            HarnessError::Config(_) => 2,
            HarnessError::Infeasible(_) => 3,
            HarnessError::Io(_) => 4,
            HarnessError::Core(e) => match e {
                superpose::Error::Domain(_) | superpose::Error::Dimension(_) | superpose::Error::Unsupported(_) => 2,
                superpose::Error::InfeasibleRate(_) | superpose::Error::InfeasibleSchedule(_) => 3,
                superpose::Error::Resource(_) => 4,
                _ => 1,
            },
        })
    }
}

impl From<superpose::Error> for HarnessError {
    fn from(e: superpose::Error) -> Self {
        HarnessError::Core(e)
    }
}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        HarnessError::Io(e.to_string())
    }
}

impl From<csv::Error> for HarnessError {
    fn from(e: csv::Error) -> Self {
        HarnessError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for HarnessError {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            HarnessError::Io(e.to_string())
        } else {
            HarnessError::Config(e.to_string())
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;

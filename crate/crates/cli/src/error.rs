use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] entpath_core::Error),

    #[error("{0} selftest check(s) failed")]
    SelftestFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(entpath_core::Error::InvalidInput(_) | entpath_core::Error::Json(_)) => 2,
            CliError::Core(entpath_core::Error::ResourceCap { .. }) => 3,
            CliError::Core(_) => 1,
            CliError::SelftestFailed(_) => 4,
        }
    }
}

use thiserror::Error;

use crate::config::ConfigError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] qswitch_core::Error),
    #[error("{0}")]
    Invariant(String),
    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for config problems, 3 for violated physical constraints, 4 for numerical failures.
    pub fn exit_code(&self) -> u8 {
        use qswitch_core::Error as E;
        match self {
            Self::Config(_) => 2,
            Self::Core(E::EigenFailure | E::FunctionUndefined { .. } | E::ProbabilityBelowFloor { .. }) => 4,
            Self::Core(_) | Self::Invariant(_) => 3,
            Self::Output { .. } => 4,
        }
    }
}

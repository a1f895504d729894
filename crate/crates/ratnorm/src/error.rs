use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] ratnorm_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write output: {0}")]
    Write(#[from] std::io::Error),
    #[error("malformed function JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed weight table: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 2 for bad input, 1 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        use ratnorm_core::Error as E;
        match self {
            CliError::Core(
                E::InvalidArgument(_)
                | E::Domain(_)
                | E::Precondition(_)
                | E::PoleInsideDisc { .. }
                | E::ConfluentPoles { .. }
                | E::ZeroOutsideDisc { .. }
                | E::NegativeWeight { .. }
                | E::ZeroNorm,
            ) => 2,
            CliError::Core(_) | CliError::Write(_) => 1,
            CliError::Usage(_) | CliError::Read { .. } | CliError::Json(_) | CliError::Csv(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

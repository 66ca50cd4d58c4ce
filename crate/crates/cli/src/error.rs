use stable_ergo_core::Error as CoreError;

/// Process exit status contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Ok = 0,
    Config = 1,
    Unknown = 2,
    Numeric = 3,
    Validation = 4,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("acceptance criteria failed: {}", .0.join(", "))]
    Validation(Vec<String>),
}

impl CliError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io { path: path.as_ref().display().to_string(), source }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Core(e) => match e {
                CoreError::TailUndetermined(_) => ExitCode::Unknown,
                CoreError::GridTooCoarse(_)
                | CoreError::NoConvergence { .. }
                | CoreError::IntegralDiverged(_)
                | CoreError::Eval(_)
                | CoreError::HorizonExceeded { .. }
                | CoreError::AllCensored(_)
                | CoreError::SignalTooNoisy(_) => ExitCode::Numeric,
                CoreError::AlphaOutOfRange(_)
                | CoreError::Domain(_)
                | CoreError::Parse { .. }
                | CoreError::NonPositiveSigma { .. }
                | CoreError::Precondition(_)
                | CoreError::InvalidConfig(_)
                | CoreError::NotErgodic(_) => ExitCode::Config,
            },
            CliError::Config(_) | CliError::Csv(_) | CliError::Json(_) => ExitCode::Config,
            CliError::Io { .. } => ExitCode::Config,
            CliError::Validation(_) => ExitCode::Validation,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

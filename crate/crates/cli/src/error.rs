use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Aborted(String),
    #[error("regime: {0}")]
    Regime(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Aborted(_) => 3,
            CliError::Regime(_) => 4,
        }
    }
}

impl From<regensim::Error> for CliError {
    fn from(e: regensim::Error) -> Self {
        match e {
            regensim::Error::Aborted { .. } => CliError::Aborted(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("config error: {0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] musielak_core::Error),
    #[error("thread pool: {0}")]
    Pool(String),
}

impl Error {
    /// Bad configuration or input, as opposed to a failure during a run.
    pub fn is_usage(&self) -> bool {
        matches!(self, Self::Config(_) | Self::Json { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

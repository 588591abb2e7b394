use semnet::corpus::{CorpusError, FetchError};
use semnet::report::ReportError;
use semnet::sentiment::SentimentError;
use semnet::store::StoreError;
use semnet::text::LexiconError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    pub fn missing_stage(stage: &str, hint: &str) -> Self {
        CliError::Data(format!("missing {stage} stage: {hint}"))
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        match e {
            CorpusError::Io { .. } => CliError::Io(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<FetchError> for CliError {
    fn from(e: FetchError) -> Self {
        match e {
            FetchError::InvalidRequest(_) => CliError::Usage(e.to_string()),
            FetchError::Parse { .. } => CliError::Data(e.to_string()),
            _ => CliError::Io(e.to_string()),
        }
    }
}

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> Self {
        match e {
            ReportError::Io { .. } => CliError::Io(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<StoreError> for CliError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::Io { .. } => CliError::Io(e.to_string()),
            StoreError::Malformed { .. } => CliError::Data(e.to_string()),
        }
    }
}

impl From<LexiconError> for CliError {
    fn from(e: LexiconError) -> Self {
        CliError::Data(format!("conflation lexicon: {e}"))
    }
}

impl From<SentimentError> for CliError {
    fn from(e: SentimentError) -> Self {
        CliError::Data(e.to_string())
    }
}

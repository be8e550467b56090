use std::path::PathBuf;

use chrono::NaiveDate;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: no valid records ({rejected} rejected)")]
    NoValidRecords { path: PathBuf, rejected: usize },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("malformed timeline: {0}")]
    Timeline(String),

    #[error("unknown event id {id:?}; known ids: {}", known.join(", "))]
    UnknownEvent { id: String, known: Vec<String> },

    #[error("malformed lexicon {source_name} line {line}: {message}")]
    Lexicon {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("invalid date window: start {start} is after end {end}")]
    InvalidWindow { start: NaiveDate, end: NaiveDate },

    #[error("empty dataset{}", context.as_deref().map(|c| format!(" for {c}")).unwrap_or_default())]
    EmptyDataset { context: Option<String> },

    #[error("dataset has no window attached")]
    MissingWindow,

    #[error("unit {id} dated {date} lies outside window {start}..={end}")]
    OutsideWindow {
        id: String,
        date: NaiveDate,
        start: NaiveDate,
        end: NaiveDate,
    },

    #[error("score {0} outside [-1, 1]")]
    ScoreOutOfRange(f64),

    #[error("invalid thresholds: delta_n {delta_n} > delta_p {delta_p}")]
    InvalidThresholds { delta_n: f64, delta_p: f64 },

    #[error("daily series has no messages")]
    AllZeroSeries,

    #[error("attack dataset is not a subset of the whole dataset (unit {0} missing)")]
    NotSubset(String),

    #[error("baseline needs at least {required} units, got {actual}")]
    InsufficientBaseline { required: usize, actual: usize },

    #[error("invalid alert policy: {0}")]
    InvalidPolicy(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn empty(context: impl Into<String>) -> Self {
        Error::EmptyDataset {
            context: Some(context.into()),
        }
    }
}

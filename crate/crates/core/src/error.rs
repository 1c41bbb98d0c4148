use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or inconsistent input data.
    Input,
    /// Invalid configuration, such as a chain that does not telescope.
    Config,
    /// A mathematical precondition failed (non-positive values and the like).
    Domain,
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{argument} must be strictly positive and finite, got {value}")]
    NonPositiveArgument { argument: &'static str, value: f64 },

    #[error("year {year}: non-positive indicator(s) {}", .indicators.join(", "))]
    NonPositiveIndicators { year: i32, indicators: Vec<String> },

    #[error("year {year}: indicator `{key}` is not present")]
    MissingIndicator { year: i32, key: String },

    #[error("factor chain does not telescope: {0}")]
    NonTelescoping(String),

    #[error("invalid factor chain: {0}")]
    InvalidChain(String),

    #[error("chain spec line {line}: {message}")]
    ChainSpec { line: usize, message: String },

    #[error("invalid zero policy: {0}")]
    InvalidZeroPolicy(String),

    #[error("end year {end} must be after start year {start}")]
    PeriodOrder { start: i32, end: i32 },

    #[error("need at least 2 records, got {0}")]
    TooFewRecords(usize),

    #[error("duplicate year {0}")]
    DuplicateYear(i32),

    #[error("no data rows")]
    NoDataRows,

    #[error("missing column `{0}`")]
    MissingColumn(String),

    #[error("duplicate column `{0}`")]
    DuplicateColumn(String),

    #[error("row {row} (line {line}), column {column}: cannot parse {value:?} as a finite number")]
    NonNumericCell {
        row: usize,
        line: u64,
        column: String,
        value: String,
    },

    #[error("row {row} (line {line}), column year: {value:?} is not a year in 1900..=2100")]
    InvalidYear {
        row: usize,
        line: u64,
        value: String,
    },

    #[error("row {row} (line {line}): expected {expected} fields, found {found}")]
    RaggedRow {
        row: usize,
        line: u64,
        expected: usize,
        found: usize,
    },

    #[error("row {row} (line {line}), year {year}: non-positive value(s) in {} (reject policy)", .columns.join(", "))]
    NonPositiveCells {
        row: usize,
        line: u64,
        year: i32,
        columns: Vec<String>,
    },

    #[error("unsupported report format `{0}` (expected csv or json)")]
    UnsupportedFormat(String),

    #[error("malformed report: {0}")]
    MalformedReport(String),

    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{}: {source}", .path.display())]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::NonPositiveArgument { .. }
            | Error::NonPositiveIndicators { .. }
            | Error::MissingIndicator { .. } => ErrorKind::Domain,
            Error::NonTelescoping(_)
            | Error::InvalidChain(_)
            | Error::ChainSpec { .. }
            | Error::InvalidZeroPolicy(_)
            | Error::UnsupportedFormat(_) => ErrorKind::Config,
            Error::PeriodOrder { .. }
            | Error::TooFewRecords(_)
            | Error::DuplicateYear(_)
            | Error::NoDataRows
            | Error::MissingColumn(_)
            | Error::DuplicateColumn(_)
            | Error::NonNumericCell { .. }
            | Error::InvalidYear { .. }
            | Error::RaggedRow { .. }
            | Error::NonPositiveCells { .. }
            | Error::MalformedReport(_)
            | Error::Csv(_)
            | Error::Json(_) => ErrorKind::Input,
            Error::File { .. } | Error::Io(_) => ErrorKind::Io,
        }
    }
}

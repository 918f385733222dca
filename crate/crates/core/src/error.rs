use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{}: missing required column '{column}'", path.display())]
    MissingColumn { path: PathBuf, column: String },

    #[error("duplicate record_id '{record_id}' at lines {first_line} and {second_line}")]
    DuplicateRecord {
        record_id: String,
        first_line: u64,
        second_line: u64,
    },

    #[error("line {line}: negative citation count {value} for record '{record_id}'")]
    NegativeCitations {
        line: u64,
        record_id: String,
        value: i64,
    },

    #[error("line {line}: year {year} outside the accepted range [1900, 2100]")]
    YearOutOfRange { line: u64, year: i64 },

    #[error("line {line}: quartile {value} outside {{1,2,3,4}}")]
    QuartileRange { line: u64, value: i64 },

    #[error(
        "conflicting quartiles for journal '{journal_id}', category '{category}', year {year} \
         (Q{first} at line {first_line}, Q{second} at line {second_line})"
    )]
    QuartileConflict {
        journal_id: String,
        category: String,
        year: i32,
        first: u8,
        first_line: u64,
        second: u8,
        second_line: u64,
    },

    #[error("invalid time window {start}:{end}")]
    InvalidWindow { start: i64, end: i64 },

    #[error("record '{record_id}' references unknown journal '{journal_id}'")]
    UnknownJournal {
        record_id: String,
        journal_id: String,
    },

    #[error("no quartile for journal '{journal_id}' in category '{category}' for {year}")]
    MissingQuartile {
        journal_id: String,
        category: String,
        year: i32,
    },

    #[error("field '{0}' has no subject categories")]
    EmptyCategorySet(String),

    #[error("field '{0}' declared more than once")]
    DuplicateField(String),

    #[error("unknown field '{0}'")]
    UnknownField(String),

    #[error("line {line}: malformed rank '{value}'")]
    MalformedRank { line: u64, value: String },

    #[error("line {line}: rank interval {lo}-{hi} has lo > hi")]
    InvertedInterval { line: u64, lo: u32, hi: u32 },

    #[error("institution '{institution_id}' listed twice in {system_name}/{field_name}")]
    DuplicateInstitution {
        system_name: String,
        field_name: String,
        institution_id: String,
    },

    #[error("expected a single ranking table, found {0}")]
    MultipleTables(usize),

    #[error("rank lists differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("correlation undefined: one rank list is constant")]
    ConstantRanks,

    #[error("institution '{0}' has no rank in the national table")]
    MissingNationalRank(String),

    #[error("agreement aggregate has a zero total denominator")]
    ZeroDenominator,

    #[error("duplicate crosswalk pair {0} -> {1}")]
    DuplicateCrosswalkPair(String, String),

    #[error("crosswalk has no resolvable pairs; missing tables: {}", .0.join(", "))]
    UnresolvedCrosswalk(Vec<String>),

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: u64, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    /// Process exit code for the command-line driver: 2 for configuration
    /// problems, 1 for everything that originates in the input data.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Config(_) | Error::InvalidWindow { .. } => 2,
            _ => 1,
        }
    }
}

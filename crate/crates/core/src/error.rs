use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("value {value} does not fit a 64-bit integer at {decimals} decimals")]
    Range { value: f64, decimals: u8 },

    #[error("deviation {n} outside the defined domain 0..={total}")]
    Domain { n: u64, total: u64 },

    #[error("model is degenerate (total deviation is zero)")]
    DegenerateModel,

    #[error("metric undefined: {0}")]
    UndefinedMetric(String),

    #[error("file not found: {}", .0.display())]
    MissingFile(PathBuf),

    #[error("{}: row {row}, column '{column}': cannot parse '{cell}' as a finite number", path.display())]
    ParseCell { path: PathBuf, row: usize, column: String, cell: String },

    #[error("{}: row {row}: label '{cell}' is not 0 or 1", path.display())]
    NonBinaryLabel { path: PathBuf, row: usize, cell: String },

    #[error("{}: row {row} has {found} fields, header has {expected}", path.display())]
    RaggedRow { path: PathBuf, row: usize, expected: usize, found: usize },

    #[error("{}: label column '{column}' not in header", path.display())]
    MissingColumn { path: PathBuf, column: String },

    #[error("model file: {0}")]
    Format(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by the data handed in (as opposed to I/O or internal faults).
    pub fn is_data_error(&self) -> bool {
        !matches!(self, Error::Io(_))
    }
}

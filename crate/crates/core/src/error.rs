use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shift {shift} at ({row}, {col}) is outside [-1, {lifting})")]
    InvalidShift {
        row: usize,
        col: usize,
        shift: i32,
        lifting: usize,
    },
    #[error("invalid code parameters: {0}")]
    InvalidSpec(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("check node degree {0} is below 2")]
    Degree(usize),
    #[error("no 4-cycle-free realization found after {0} attempts")]
    ConstructionFailure(usize),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

use thiserror::Error;

#[derive(Error, Debug)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] isoknot::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_CRITERIA: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use isoknot::Error as E;
        match self {
            CliError::Core(E::Internal(_)) | CliError::Json(_) => EXIT_INTERNAL,
            CliError::Core(E::MaxRoundsExceeded { .. } | E::ContainmentUnachievable { .. }) => EXIT_CRITERIA,
            _ => EXIT_VALIDATION,
        }
    }
}

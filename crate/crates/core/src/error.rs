use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("sigma = {sigma} is below the noise floor sigma0 = {sigma0}")]
    BelowNoiseFloor { sigma: f64, sigma0: f64 },

    #[error("dual point is not feasible")]
    InfeasibleDualPoint,

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("no degrees of freedom left: n = {n}, support size = {support}")]
    DegreesOfFreedom { n: usize, support: usize },

    #[error("degenerate design: {0}")]
    DegenerateDesign(String),

    #[error("parse error at row {row}{}: {msg}", .col.map(|c| format!(", column {c}")).unwrap_or_default())]
    Parse {
        row: usize,
        col: Option<usize>,
        msg: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Errors caused by the numbers themselves rather than by bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::DegreesOfFreedom { .. } | Error::DegenerateDesign(_)
        )
    }
}

use thiserror::Error;

use crate::lambertw::Branch;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("lambert W is undefined at x = {x} on the {branch} branch")]
    Domain { x: f64, branch: Branch },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("frequency {frequency_hz} Hz is outside the tabulated band [{low_hz}, {high_hz}] Hz")]
    OutOfRange {
        frequency_hz: f64,
        low_hz: f64,
        high_hz: f64,
    },

    #[error("invalid {field}: {reason}")]
    Invalid { field: &'static str, reason: String },

    #[error("infeasible ({limit}): {reason}")]
    Infeasible { limit: &'static str, reason: String },

    #[error("gain calibration failed: {0}")]
    Calibration(String),

    #[error("no sign change for {equation} in [{low}, {high}]")]
    NoBracket {
        equation: &'static str,
        low: f64,
        high: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn infeasible(limit: &'static str, reason: impl Into<String>) -> Self {
        Error::Infeasible {
            limit,
            reason: reason.into(),
        }
    }

    /// True for errors caused by valid inputs that admit no plan, as opposed
    /// to malformed input.
    pub fn is_infeasible(&self) -> bool {
        matches!(self, Error::Infeasible { .. })
    }
}

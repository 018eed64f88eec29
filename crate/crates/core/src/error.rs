use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sample track does not cover coordinate {t}")]
    MissingSamples { t: i64 },

    #[error("shift range is empty")]
    EmptyShiftRange,

    #[error("no scanned window average fell below {epsilon} (smallest was {smallest})")]
    NeverBelow { epsilon: f64, smallest: f64 },

    #[error("budget too small: {0}")]
    BudgetTooSmall(String),

    #[error("atom mass fraction {fraction} exceeds 1 + tolerance")]
    FractionExceedsOne { fraction: f64 },

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Outcome of a command or corpus instance, as written to the `status`
/// field of every report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    /// The theorem's hypothesis does not hold, so there is nothing to check.
    HypothesisFailure,
    /// A checked statement came out false.
    VerdictFailure,
    ParseError,
    UsageError,
    ResourceLimit,
    InternalError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok | Status::HypothesisFailure => 0,
            Status::VerdictFailure | Status::InternalError => 1,
            Status::ParseError | Status::UsageError => 2,
            Status::ResourceLimit => 3,
        }
    }

    pub fn of_error(e: &Error) -> Status {
        match e {
            Error::Malformed(_) | Error::Json(_) | Error::EmptySpace => Status::ParseError,
            Error::Io(_) | Error::Infeasible(_) | Error::UnsupportedCoefficients => Status::UsageError,
            Error::ResourceLimit { .. } => Status::ResourceLimit,
            Error::Internal(_) => Status::InternalError,
        }
    }
}

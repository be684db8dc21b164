use num_bigint::BigUint;
use thiserror::Error;

use crate::analysis::CounterexampleReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An enumeration or state space grew past the configured budget.
    #[error("resource limit: {what} needs {required} states, budget is {budget}")]
    ResourceLimit {
        what: &'static str,
        required: BigUint,
        budget: u64,
    },

    #[error("ratio undefined: biased gambler expected utility {0} is not positive")]
    NonPositiveDenominator(String),

    #[error("counterexample found: {0}")]
    Counterexample(Box<CounterexampleReport>),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn limit(what: &'static str, required: impl Into<BigUint>, budget: u64) -> Self {
        Error::ResourceLimit {
            what,
            required: required.into(),
            budget,
        }
    }
}

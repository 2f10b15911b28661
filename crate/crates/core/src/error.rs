use thiserror::Error;

/// Everything that can go wrong across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid cyclic factor {0}: every factor must be at least 2")]
    InvalidFactor(u64),
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("invalid order {0}")]
    InvalidOrder(u64),
    #[error("invalid subgroup index {index} for a group of order {order}")]
    InvalidIndex { index: u64, order: u64 },
    #[error("group mismatch: {0}")]
    SpecMismatch(String),
    #[error("the set is empty")]
    EmptySet,
    #[error("invalid h = {0}: must be at least 1")]
    InvalidH(u32),
    #[error("invalid s = {0}: must be at least 1")]
    InvalidS(u32),
    #[error("{divisor} does not divide {order}")]
    InvalidDivisor { divisor: u64, order: u64 },
    #[error("outside the stated domain of the closed form: {0}")]
    OutsideTheoremDomain(String),
    #[error("wrong group class: {0}")]
    WrongGroupClass(String),
    #[error("outside the validated domain: {0}")]
    OutsideValidatedDomain(String),
    #[error("construction invariant violated: {0}")]
    ConstructionInvariantViolated(String),
    #[error("no quotient of the requested type: {0}")]
    QuotientUnavailable(String),
    #[error("condition violated: {0}")]
    ConditionViolated(String),
    #[error("oracle budget exceeded: order {order} > cap {cap}")]
    BudgetExceeded { order: u64, cap: u64 },
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

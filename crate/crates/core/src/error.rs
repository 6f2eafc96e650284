use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("ground set must contain at least one element")]
    EmptyGroundSet,
    #[error("ground set of size {0} exceeds the supported maximum of 64 elements")]
    GroundSetTooLarge(usize),
    #[error("label count {labels} does not match ground set size {n}")]
    LabelMismatch { labels: usize, n: usize },
    #[error("a decomposable function needs at least one component")]
    NoComponents,
    #[error("element {element} is outside the ground set of size {n}")]
    ElementOutOfRange { element: usize, n: usize },
    #[error("component index {index} out of range for {len} components")]
    ComponentOutOfRange { index: usize, len: usize },
    #[error("component is not normalized: f(empty set) = {0}")]
    NotNormalized(f64),
    #[error("component takes a negative or non-finite value: {0}")]
    NegativeValue(f64),
    #[error("weight vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("element {0} is already in the set")]
    ElementAlreadyPresent(usize),
    #[error("ground set of size {n} is too large for exhaustive enumeration (limit {limit})")]
    TooLargeForExhaustive { n: usize, limit: usize },
    #[error("enumeration budget of {budget} sets exceeded")]
    BudgetExceeded { budget: usize },
    #[error("every component is identically zero")]
    AllZero,
    #[error("universe element {0} is not covered by any set")]
    Uncovered(usize),
    #[error("every facility column is zero")]
    AllColumnsZero,
    #[error("component {0} is not declared monotone")]
    NotMonotone(usize),
    #[error("importance mode {mode} is not applicable: {reason}")]
    IncompatibleMode { mode: String, reason: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("coordinate {index} = {value} lies outside [0, 1]")]
    CoordinateOutOfRange { index: usize, value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

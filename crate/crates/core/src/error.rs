use thiserror::Error;

use crate::time::Time;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("event list must be nonempty")]
    EmptyEvents,

    #[error("event times must be strictly increasing (at t = {at})")]
    NonIncreasingTimes { at: Time },

    #[error("periodic pattern must be nonempty")]
    EmptyPattern,

    #[error("periodic pattern durations must be positive")]
    NonPositiveDuration,

    #[error("window width d must be positive")]
    NonPositiveWidth,

    #[error("operation requires constant tails; periodic tail unsupported here")]
    PeriodicUnsupported,

    #[error("coordinate range {lo}..{hi} out of bounds for dimension {dim}")]
    RangeOutOfBounds { lo: usize, hi: usize, dim: usize },

    #[error("duplicate entry in {universe} universe: {entry}")]
    DuplicateUniverseEntry { universe: &'static str, entry: String },

    #[error("table index {index} out of range for {universe} universe of size {size}")]
    IndexOutOfRange {
        universe: &'static str,
        index: usize,
        size: usize,
    },

    #[error("no induced system: no input in S has a state in S")]
    NoInducedSystem,

    #[error("state {state} for input {input} has no {side} value")]
    MissingLimit {
        side: &'static str,
        input: String,
        state: String,
    },

    #[error("tau = {tau} outside (0, d] for d = {d}")]
    TauOutOfRange { tau: Time, d: Time },

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("unknown signal name `{name}`")]
    UnknownSignal { name: String },
}

pub type Result<T> = std::result::Result<T, Error>;

use alloc::string::String;
use alloc::vec::Vec;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("alpha = {0} is outside the open interval (1, 2)")]
    AlphaOutOfRange(f64),
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("parse error at offset {offset}: expected {}", expected.join(" or "))]
    Parse { offset: usize, expected: Vec<&'static str> },
    #[error("evaluation error: {0}")]
    Eval(String),
    #[error("sigma({x}) = {value} is not positive")]
    NonPositiveSigma { x: f64, value: f64 },
    #[error("tail exponent could not be determined on the {0} side")]
    TailUndetermined(&'static str),
    #[error("integral diverges: {0}")]
    IntegralDiverged(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("intrinsic time {target} not reached within {steps} steps")]
    HorizonExceeded { target: f64, steps: u64 },
    #[error("all {0} paths were censored")]
    AllCensored(usize),
    #[error("process is not ergodic: {0}")]
    NotErgodic(String),
    #[error("signal too noisy: {0}")]
    SignalTooNoisy(String),
}

pub type Result<T> = core::result::Result<T, Error>;

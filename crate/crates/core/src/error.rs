use thiserror::Error;

/// Errors raised by the counting, evaluation and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("{what} = {got} exceeds the cap of {limit}")]
    CapExceeded {
        what: &'static str,
        limit: u64,
        got: u64,
    },

    #[error("live state count {states} exceeds the memory budget of {budget}")]
    MemoryBudgetExceeded { states: usize, budget: usize },

    #[error("grid of {nodes} nodes exceeds the node cap of {cap}")]
    NodeCapExceeded { nodes: f64, cap: u64 },

    #[error("simulation needs {steps} steps, budget is {budget}")]
    BudgetExceeded { steps: u128, budget: u128 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point lies outside the box of radius {delta}")]
    OutOfRegion { delta: f64 },

    #[error("delta = {0} is outside the admissible range")]
    InvalidDelta(f64),

    #[error("radius = {0} must lie in (0, pi]")]
    InvalidRadius(f64),

    #[error("row index {k} is not in 1..={n}")]
    BadRowIndex { k: usize, n: usize },

    #[error("graph is not even-degree (vertex {vertex} has odd degree)")]
    NotEvenDegree { vertex: usize },

    #[error("no closed form for n = {0}")]
    UnsupportedN(usize),

    #[error("closed form needs a step count divisible by 4, got {0}")]
    UnsupportedT(usize),

    #[error("step count {0} is not a positive multiple of 4")]
    BadStepCount(usize),

    #[error("n * delta = {0} must lie in (0, 1)")]
    BadDelta(f64),

    #[error("no exact count available for n = {n}, t = {t}: {reason}")]
    NoExactCount { n: usize, t: usize, reason: String },

    #[error("alpha and beta must be positive (alpha = {alpha}, beta = {beta})")]
    BadAlphaBeta { alpha: f64, beta: f64 },

    #[error("degenerate case: {0}")]
    DegenerateCase(&'static str),

    #[error("alpha = {0} is not positive")]
    AlphaNotPositive(f64),

    #[error("bad input: {0}")]
    BadInput(String),
}

impl Error {
    /// True for errors caused by a resource cap rather than a malformed request.
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded { .. }
                | Error::MemoryBudgetExceeded { .. }
                | Error::NodeCapExceeded { .. }
                | Error::BudgetExceeded { .. }
                | Error::NoExactCount { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

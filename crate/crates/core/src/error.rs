use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The ballot file could not be parsed.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An election, committee or portioning violates a structural invariant.
    #[error("invalid input: {0}")]
    Structural(String),

    /// An exhaustive method was asked to enumerate more than it is allowed to.
    #[error("{method}: {required} candidates to enumerate exceeds the cap of {cap}; use `{fallback}` instead")]
    Capacity {
        method: &'static str,
        required: u128,
        cap: u128,
        fallback: &'static str,
    },

    /// An iterative solver stopped before reaching its tolerance.
    #[error("{method} did not converge: residual {residual:e} after {iterations} iterations")]
    Numerical {
        method: &'static str,
        residual: f64,
        iterations: usize,
    },

    /// The question is not defined for this input (e.g. perfect representation with k not dividing n).
    #[error("undefined for this input: {0}")]
    Domain(String),

    /// Unknown rule, axiom, example or model name.
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

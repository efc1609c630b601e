use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("index {index} out of range (expected 1..={bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("principal part is not sign-skew-symmetric: b[{i}][{j}] = {bij}, b[{j}][{i}] = {bji}")]
    NotSignSkewSymmetric {
        i: usize,
        j: usize,
        bij: String,
        bji: String,
    },

    #[error("exchange matrix is not acyclic; cycle in its digraph: {}", fmt_cycle(.cycle))]
    NotAcyclic { cycle: Vec<usize> },

    #[error("exchange matrix is not connected; components: {components:?}")]
    NotConnected { components: Vec<Vec<usize>> },

    #[error("expected a matrix without frozen rows, found m = {m}")]
    HasFrozenRows { m: usize },

    #[error("Γ-loop at label {0}")]
    GammaLoopAt(usize),

    #[error("Γ-2-cycle at label {0}")]
    GammaTwoCycleAt(usize),

    #[error("label {0} is frozen and cannot be mutated")]
    FrozenLabel(usize),

    #[error("frontier exhausted: {0}")]
    FrontierExhausted(String),

    #[error("folding is ill-defined: {0}")]
    IllDefinedFolding(String),

    #[error("inexact division, remainder witness: {remainder}")]
    InexactDivision { remainder: String },

    #[error("division by zero")]
    DivisionByZero,

    #[error("polynomials live in different rings")]
    RingMismatch,

    #[error("unknown verifier '{0}'")]
    UnknownVerifier(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

fn fmt_cycle(cycle: &[usize]) -> String {
    let mut parts: Vec<String> = cycle.iter().map(|v| (v + 1).to_string()).collect();
    if let Some(first) = parts.first().cloned() {
        parts.push(first);
    }
    parts.join(" -> ")
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

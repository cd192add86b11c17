use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    EndpointOutOfRange { u: usize, v: usize, n: usize },

    #[error("a digraph needs at least one vertex")]
    EmptyVertexSet,

    #[error("{what} requires size at least {min}, got {got}")]
    SizeTooSmall {
        what: &'static str,
        min: usize,
        got: usize,
    },

    #[error("{what} needs {required} units but the budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        required: u128,
        budget: u128,
    },

    /// The search gave up; the answer is unknown.
    #[error("search node limit of {limit} exhausted")]
    BudgetExhausted { limit: u64 },

    #[error("cannot take the disjoint union of an empty list")]
    EmptyList,

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("format {0} cannot be decoded")]
    FormatUnsupported(&'static str),

    #[error("pin {vertex} -> {value} is out of range")]
    PinOutOfRange { vertex: usize, value: usize },

    #[error("symbol `{symbol}` used with arity {first} and {second}")]
    ArityMismatch {
        symbol: String,
        first: usize,
        second: usize,
    },

    #[error("unknown builtin condition `{0}`")]
    UnknownBuiltin(String),

    #[error("invalid minor condition: {0}")]
    InvalidCondition(String),

    #[error("invalid pp formula: {0}")]
    InvalidFormula(String),

    #[error("constant {constant} is not a vertex of a digraph with {n} vertices")]
    ConstantOutOfRange { constant: usize, n: usize },

    #[error("the digraph is not a core")]
    NotACore,

    #[error("need at least {min} vertices, got {got}")]
    TooFewVertices { min: usize, got: usize },

    #[error("the digraph is totally rectangular")]
    IsTotallyRectangular,

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// Resource-limit failures, as opposed to negative answers or bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. } | Error::BudgetExhausted { .. }
        )
    }
}

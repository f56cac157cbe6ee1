use thiserror::Error;

/// Errors raised while parsing instance files.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: malformed header `{found}` (expected `kcc <n>` or `mfast <n>`)")]
    Header { line: usize, found: String },
    #[error("line {line}: malformed pair line `{found}`")]
    Malformed { line: usize, found: String },
    #[error("line {line}: vertex {vertex} out of range for n={n}")]
    OutOfRange {
        line: usize,
        vertex: usize,
        n: usize,
    },
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: duplicate pair ({u}, {v})")]
    DuplicatePair { line: usize, u: usize, v: usize },
    #[error("tournament is missing pair ({u}, {v})")]
    MissingPair { u: usize, v: usize },
    #[error("expected a {expected} instance, found {found}")]
    WrongProblem {
        expected: &'static str,
        found: &'static str,
    },
    #[error("ground truth: {0}")]
    GroundTruth(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("self pair ({0}, {0}) cannot be queried")]
    SelfPair(usize),
    #[error("exhaustive search over {bits:.1} bits exceeds the budget of {budget:.1} bits")]
    BudgetExceeded { bits: f64, budget: f64 },
    #[error("permutation enumeration for n={n} exceeds the cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("enumeration plan needs {needed} guesses but the budget is {budget}")]
    PlanBudget { needed: f64, budget: usize },
    #[error("every enumeration guess produced an infeasible LP")]
    NoFeasibleCandidate,
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Lp(#[from] crate::lp::LpError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group spec `{0}`: {1}")]
    GroupSyntax(String, String),
    #[error("invariant factors {0:?} do not form a divisibility chain n1 | n2 | ... with n1 > 1")]
    InvariantChain(Vec<u32>),
    #[error("group order {order} exceeds the search ceiling {ceiling}")]
    AboveCeiling { order: usize, ceiling: usize },
    #[error("ceiling {0} is outside the supported range 1..=64")]
    UnsupportedCeiling(usize),
    #[error("element does not belong to group {0}")]
    ElementMismatch(String),
    #[error("operands belong to different groups ({0} vs {1})")]
    GroupMismatch(String, String),
    #[error("invalid sequence literal `{0}`: {1}")]
    SequenceSyntax(String, String),
    #[error("invalid weight spec `{0}`: {1}")]
    WeightSyntax(String, String),
    #[error("group {group} is not of the required shape {expected}")]
    WrongShape { group: String, expected: &'static str },
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("precondition not met: {0}")]
    Precondition(String),
    #[error("weight set is trivial (contains a multiple of the exponent)")]
    TrivialWeights,
    #[error("search budget of {budget} nodes exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("automorphism-orbit pruning unavailable: {0}")]
    OrbitPruningUnavailable(String),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("bound violated: {0}")]
    BoundViolation(String),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

pub type Result<T> = std::result::Result<T, Error>;

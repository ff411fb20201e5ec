use thiserror::Error;

use crate::parser::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NonPrimeModulus(u64),
    #[error("modulus {0} is reducible")]
    ReducibleModulus(String),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("coefficient {0} has no image in the field")]
    CoefficientNotInField(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("no zero graded component up to degree cap {cap} (component {cap} has dimension {dim})")]
    NotArtinianWithinCap { cap: usize, dim: usize },
    #[error("multiplication table failed the {0} check")]
    AssocCheckFailed(&'static str),
    #[error("operands belong to different algebras")]
    AlgebraMismatch,
    #[error("matrix entries are not elements of the algebra: {0}")]
    EntriesNotInAlgebra(String),

    #[error("algebra is not short (m^3 != 0)")]
    NotShort,
    #[error("element is not in the maximal ideal")]
    NotInMaxIdeal,
    #[error("element is zero")]
    ZeroElement,
    #[error("element is a unit")]
    UnitElement,
    #[error("element is not a homogeneous linear form")]
    NotLinearForm,
    #[error("Hilbert series {found:?} is not of the form [1, e, e-1]")]
    WrongHilbertSeries { found: Vec<usize> },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("enumeration needs {needed} points, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("operation requires a finite field")]
    InfiniteField,

    #[error("undecided within budget: {0}")]
    UndecidedAtBudget(String),
    #[error("hypotheses fail: {}", .0.join("; "))]
    HypothesesFail(Vec<String>),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    /// Undecided verdicts are not faults; callers (the CLI in particular)
    /// report them with their own status.
    pub fn is_undecided(&self) -> bool {
        matches!(self, Error::UndecidedAtBudget(_))
    }
}

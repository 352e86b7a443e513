use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("covering relation has a cycle through point {0}")]
    CycleDetected(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("map is not order-preserving: {lo} <= {hi} but f({lo}) = {f_lo} is not <= f({hi}) = {f_hi}")]
    NotOrderPreserving {
        lo: usize,
        hi: usize,
        f_lo: usize,
        f_hi: usize,
    },

    #[error("maps do not share source and target spaces")]
    MismatchedSpaces,

    #[error("set is not open (point {missing} lies below member {member} but is missing)")]
    NotOpen { member: usize, missing: usize },

    #[error("space is not minimal: point {0} is a beat point")]
    NotMinimal(usize),

    #[error("budget of {0} maps exceeded")]
    BudgetExceeded(usize),

    #[error("lift start value {start} does not lie over f(k) = {base}")]
    BaseMismatch { start: i64, base: u32 },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("circle maps have mismatched sizes")]
    MismatchedSizes,

    #[error("stage {stage} is not continuous at points {lo} <= {hi}")]
    NotContinuous { stage: String, lo: i64, hi: i64 },

    #[error("fence step {index} is not pointwise comparable")]
    BrokenFence { index: usize },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty input: {0}")]
    Empty(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

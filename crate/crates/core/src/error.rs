use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("structural mismatch: {0}")]
    Structural(String),

    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },

    #[error("image {index} has a nonzero constant term; composition needs the polynomial override")]
    ConstantTerm { index: usize },

    #[error("truncation order {order} exceeds the hard cap {cap}")]
    OrderTooLarge { order: usize, cap: usize },

    #[error("unsupported form degree {0}")]
    UnsupportedDegree(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("one-form is not integrable: ω∧dω has {nonzero} nonzero coefficients")]
    NotIntegrable { nonzero: usize },

    #[error("degenerate Hessian: rank {rank} < {nvars}")]
    RankDeficient { rank: usize, nvars: usize },

    #[error("linear parts are not in general position")]
    GeneralPosition,

    #[error("zero form has no leading part")]
    ZeroForm,

    #[error("{line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("{0}")]
    Numerics(String),

    #[error("scenario error: {0}")]
    Scenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mismatched field: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("operation requires a finite field")]
    NotFinite,
    #[error("characteristic 2 is not supported")]
    CharacteristicTwo,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("singular matrix")]
    Singular,
    #[error("linearly dependent vectors")]
    Dependent,
    #[error("wrong degree: expected {expected}, got {got}")]
    WrongDegree { expected: u32, got: u32 },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableIndex { index: usize, nvars: usize },
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("not homogeneous")]
    NotHomogeneous,
    #[error("point count budget exceeded: {needed} evaluations > budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("uncountable atom: {0}")]
    UncountableAtom(String),
    #[error("degenerate quadratic form")]
    Degenerate,
    #[error("point not on variety")]
    PointNotOnVariety,
    #[error("point not singular")]
    PointNotSingular,
    #[error("no rational point found: {0}")]
    NoRationalPoint(String),
    #[error("Q1 not smooth")]
    NotSmooth,
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("not a cocycle")]
    NotCocycle,
    #[error("unstable: the span of the forms is not Frobenius-stable")]
    Unstable,
    #[error("product of the forms is not defined over the base field")]
    NotDefinedOverBase,
    #[error("no invertible averaging matrix after {tries} attempts (seed {seed})")]
    RetryExhausted { tries: u32, seed: u64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal defect: {0}")]
    Defect(String),
}

impl Error {
    /// Defects signal a wrong answer rather than a rejected input.
    pub fn is_defect(&self) -> bool {
        matches!(self, Error::Defect(_))
    }
}

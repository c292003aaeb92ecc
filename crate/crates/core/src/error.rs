use thiserror::Error;

use crate::oracle::CountProfile;

/// Stage of the density pipeline, reported by math-stage failures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Ring,
    Lattice,
    Jordan,
    Forms,
    Density,
    Oracle,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Stage::Ring => "ring-arith",
            Stage::Lattice => "lattice",
            Stage::Jordan => "jordan",
            Stage::Forms => "quotient-forms",
            Stage::Density => "density",
            Stage::Oracle => "oracle",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter is not a unit of A")]
    NonUnitParam,
    #[error("residue degree {r} unsupported (1..={max})")]
    UnsupportedDegree { r: usize, max: usize },
    #[error("2-adic precision {k} unsupported (1..=64)")]
    UnsupportedPrecision { k: u32 },
    #[error("element is not a unit")]
    NonUnitInverse,
    #[error("operands belong to different ring contexts")]
    ContextMismatch,
    #[error("gram matrix is not hermitian at entry ({row}, {col})")]
    NotHermitian { row: usize, col: usize },
    #[error("gram matrix is not square")]
    NotSquare,
    #[error("form is degenerate at working precision (det valuation {det_val:?}, bound {bound})")]
    Degenerate { det_val: Option<u32>, bound: u32 },
    #[error("base change matrix has non-unit determinant")]
    SingularU,
    #[error("precision exhausted in {stage}")]
    PrecisionExhausted { stage: Stage },
    #[error("operation does not apply to this case/index: {0}")]
    CaseMismatch(String),
    #[error("canonicalization failed: {0}")]
    CanonFail(String),
    #[error("no solution to the special-vector system")]
    NoSolution,
    #[error("quadratic form has odd dimension")]
    OddDimension,
    #[error("oracle budget of {budget} states exceeded")]
    BudgetExceeded { budget: u64, partial: Box<CountProfile> },
    #[error("exhaustive oracle limited to rank {max}, got {n}")]
    RankTooLarge { n: usize, max: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal inconsistency in {stage}: {msg}")]
    Internal { stage: Stage, msg: String },
}

impl Error {
    pub(crate) fn internal(stage: Stage, msg: impl Into<String>) -> Self {
        Error::Internal { stage, msg: msg.into() }
    }

    /// Pipeline stage responsible for the error, if it is a math-stage error.
    pub fn stage(&self) -> Option<Stage> {
        match self {
            Error::NonUnitParam
            | Error::UnsupportedDegree { .. }
            | Error::UnsupportedPrecision { .. }
            | Error::NonUnitInverse
            | Error::ContextMismatch => Some(Stage::Ring),
            Error::Degenerate { .. } | Error::SingularU => Some(Stage::Lattice),
            Error::PrecisionExhausted { stage } | Error::Internal { stage, .. } => Some(*stage),
            Error::CanonFail(_) => Some(Stage::Jordan),
            Error::NoSolution | Error::OddDimension | Error::CaseMismatch(_) => Some(Stage::Forms),
            Error::BudgetExceeded { .. } | Error::RankTooLarge { .. } => Some(Stage::Oracle),
            Error::NotHermitian { .. } | Error::NotSquare | Error::Parse(_) => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

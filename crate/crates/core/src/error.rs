use thiserror::Error;

use crate::space::VarSpace;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("variable space mismatch: {0} vs {1}")]
    SpaceMismatch(VarSpace, VarSpace),

    #[error("unknown variable {var} in space {space}")]
    UnknownVariable { var: String, space: VarSpace },

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("polynomial is not symmetric: transposition (x{0} x{1}) changes it")]
    NotSymmetric(usize, usize),

    #[error("operator is not symmetric: transposition (x{0} x{1}) changes it")]
    NotSymmetricOperator(usize, usize),

    #[error("not a symmetric derivation: {0}")]
    NotDerivation(String),

    #[error("zero operator has no symbol")]
    ZeroOperator,

    #[error("polynomial does not vanish on the characteristic variety")]
    NotOnVariety,

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("numerical error: {0}")]
    Numeric(String),

    #[error("root finder did not converge (best residual {residual:e})")]
    NoConvergence { residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

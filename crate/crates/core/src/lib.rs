//! Exact Weyl-algebra computations around trace functions of polynomial roots.
//!
//! For the roots `x_1..x_k` of `P_σ(z) = z^k + Σ (−1)^h σ_h z^{k−h}`, a trace
//! function is `σ ↦ Σ_j f(x_j)`. This crate builds the explicit second-order
//! operators in `ℚ[σ]⟨∂_σ⟩` that annihilate every trace function, transports
//! symmetric operators in `x` to `σ`-coordinates, decides left-ideal membership
//! by symbol descent on the characteristic variety, and checks the whole
//! picture numerically with contour integrals.

pub mod algebra {
    //! Scalars, polynomials and the normal-ordered Weyl algebra.
    pub use crate::json::{PolyJson, WeylJson};
    pub use crate::poly::{sigma, x, Exp, Poly};
    pub use crate::rational::Rational;
    pub use crate::space::{Family, Var, VarSpace, Weight};
    pub use crate::weyl::{ds, ms, WeylOp};
}

pub mod annihilators;
pub mod charvar;
pub mod error;
pub mod exec;
pub mod golden;
pub mod json;
pub mod membership;
pub mod numerics;
pub mod poly;
#[cfg(test)]
mod properties;
pub mod rational;
pub mod report;
pub mod space;
pub mod suites;
pub mod symfun;
pub mod transport;
pub mod weyl;

pub use error::{Error, Result};
pub use exec::Exec;

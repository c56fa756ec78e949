//! Floating-point cross-checks: roots, contour integrals, finite differences.

pub mod contour;
pub mod fd;
pub mod roots;

pub use contour::{dn_contour, root_sum, trace_contour, Analytic, QuadratureSpec, TestFn, TraceValue};
pub use fd::{fd_annihilation_check, FdReport, DEFAULT_STEP};
pub use num_complex::Complex64;
pub use roots::{p_eval, poly_roots};

use crate::error::{Error, Result};

/// Rejects NaN and infinite entries.
pub fn check_finite(v: &[Complex64]) -> Result<()> {
    if v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::Numeric("non-finite input".into()))
    }
}

/// Relative distance `|a − b| / max(1, |b|)`.
pub fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

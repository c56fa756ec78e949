//! Finite-difference check that an operator in `σ` kills a contour trace.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::contour::{trace_contour, Analytic, QuadratureSpec};
use crate::error::{Error, Result};
use crate::space::VarSpace;
use crate::symfun::discriminant;
use crate::weyl::WeylOp;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FdReport {
    /// Richardson-extrapolated `P[F](σ_0)`.
    pub value: Complex64,
    pub residual: f64,
    /// `max(1, |F|)` over the stencil.
    pub scale: f64,
    pub tolerance: f64,
    /// `log2` of the ratio of the raw residuals at `h` and `h/2`.
    pub order_estimate: f64,
    pub pass: bool,
}

pub const DEFAULT_STEP: f64 = 5e-2;
const REL_TOL: f64 = 1e-6;
const DISC_FLOOR: f64 = 1e-6;

fn binom(n: u32, j: u32) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

struct Sampler<'a> {
    f: &'a dyn Analytic,
    sigma0: &'a [f64],
    spec: QuadratureSpec,
    cache: HashMap<(Vec<i64>, u64), Complex64>,
    scale: f64,
}

impl Sampler<'_> {
    /// `F` at `σ_0 + offsets·h/2`.
    fn at(&mut self, offsets: &[i64], h: f64) -> Result<Complex64> {
        let key = (offsets.to_vec(), h.to_bits());
        if let Some(v) = self.cache.get(&key) {
            return Ok(*v);
        }
        let sigma: Vec<Complex64> = self
            .sigma0
            .iter()
            .zip(offsets)
            .map(|(s, &o)| Complex64::new(s + o as f64 * h / 2.0, 0.0))
            .collect();
        let v = trace_contour(self.f, &sigma, &self.spec)?.value;
        self.scale = self.scale.max(v.norm());
        self.cache.insert(key, v);
        Ok(v)
    }

    /// Tensor product of central differences `δ_h^{β_i}` divided by `h^{|β|}`.
    fn derivative(&mut self, beta: &[u32], h: f64) -> Result<Complex64> {
        let mut stencil: Vec<(Vec<i64>, f64)> = vec![(vec![0; beta.len()], 1.0)];
        for (i, &n) in beta.iter().enumerate() {
            let mut next = Vec::with_capacity(stencil.len() * (n as usize + 1));
            for (off, w) in &stencil {
                for j in 0..=n {
                    let mut o = off.clone();
                    o[i] = n as i64 - 2 * j as i64;
                    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                    next.push((o, w * sign * binom(n, j)));
                }
            }
            stencil = next;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (o, w) in stencil {
            acc += self.at(&o, h)? * w;
        }
        Ok(acc / h.powi(beta.iter().sum::<u32>() as i32))
    }

    fn apply(&mut self, op: &WeylOp, h: f64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (beta, a) in op.terms() {
            acc += self.derivative(&beta.0, h)? * a.eval_f64(self.sigma0);
        }
        Ok(acc)
    }
}

/// Evaluates `P[F](σ_0)` for `F(σ) = Σ_j f(x_j(σ))` and compares with zero.
pub fn fd_annihilation_check(op: &WeylOp, f: &dyn Analytic, sigma0: &[f64], h: f64) -> Result<FdReport> {
    let VarSpace::Sigma(k) = op.space() else {
        return Err(Error::SpaceMismatch(op.space(), VarSpace::Sigma(op.k())));
    };
    if sigma0.len() != k {
        return Err(Error::OutOfRange(format!(
            "σ_0 has {} entries, expected {k}",
            sigma0.len()
        )));
    }
    if !(h > 0.0 && h.is_finite()) || sigma0.iter().any(|s| !s.is_finite()) {
        return Err(Error::Numeric(
            "step and base point must be finite, step positive".into(),
        ));
    }
    let disc = discriminant(k)?.eval_f64(sigma0);
    let size = sigma0.iter().enumerate().fold(1.0f64, |m, (h, s)| {
        m.max((s.abs() / binom(k as u32, h as u32 + 1)).powf(1.0 / (h + 1) as f64))
    });
    if disc.abs() < DISC_FLOOR * size.powi((k * (k - 1)) as i32) {
        return Err(Error::Numeric(format!(
            "base point too close to the discriminant locus (Δ = {disc:e})"
        )));
    }
    let reach = op.order() as f64 * h;
    let padded: Vec<Complex64> = sigma0.iter().map(|s| Complex64::new(s.abs() + reach, 0.0)).collect();
    let spec = QuadratureSpec::auto(&padded);
    let mut sampler = Sampler {
        f,
        sigma0,
        spec,
        cache: HashMap::new(),
        scale: 1.0,
    };
    let coarse = sampler.apply(op, h)?;
    let fine = sampler.apply(op, h / 2.0)?;
    let value = fine + (fine - coarse) / 3.0;
    let residual = value.norm();
    let tolerance = REL_TOL * sampler.scale;
    let order_estimate = (coarse.norm() / fine.norm()).log2();
    Ok(FdReport {
        value,
        residual,
        scale: sampler.scale,
        tolerance,
        order_estimate,
        pass: residual <= tolerance,
    })
}

//! Trapezoidal contour integrals for traces and derived Newton values.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::check_finite;
use super::roots::p_eval;
use crate::error::{Error, Result};

/// Entire function with a known derivative.
pub trait Analytic: Sync {
    fn eval(&self, z: Complex64) -> Complex64;
    fn deriv(&self, z: Complex64) -> Complex64;
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum TestFn {
    Exp,
    Sin,
    Pow(u32),
    Const(f64),
}

impl Analytic for TestFn {
    fn eval(&self, z: Complex64) -> Complex64 {
        match *self {
            TestFn::Exp => z.exp(),
            TestFn::Sin => z.sin(),
            TestFn::Pow(m) => z.powu(m),
            TestFn::Const(c) => Complex64::new(c, 0.0),
        }
    }

    fn deriv(&self, z: Complex64) -> Complex64 {
        match *self {
            TestFn::Exp => z.exp(),
            TestFn::Sin => z.cos(),
            TestFn::Pow(0) | TestFn::Const(_) => Complex64::new(0.0, 0.0),
            TestFn::Pow(m) => z.powu(m - 1) * m as f64,
        }
    }
}

impl std::str::FromStr for TestFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exp" => Ok(TestFn::Exp),
            "sin" => Ok(TestFn::Sin),
            _ => {
                if let Some(m) = s.strip_prefix("pow:") {
                    m.parse()
                        .map(TestFn::Pow)
                        .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))
                } else if let Some(c) = s.strip_prefix("const:") {
                    c.parse()
                        .map(TestFn::Const)
                        .map_err(|_| Error::Parse(format!("bad constant in {s:?}")))
                } else {
                    Err(Error::Parse(format!("unknown function {s:?}")))
                }
            }
        }
    }
}

/// Circle radius and node count for the trapezoidal rule.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub radius: f64,
    pub nodes: usize,
}

impl QuadratureSpec {
    /// `R = 2.1·max(1, Σ|σ_h|^{1/h})`, nodes the next power of two above
    /// `max(128, 16R)`.
    pub fn auto(sigma: &[Complex64]) -> Self {
        let bound: f64 = sigma
            .iter()
            .enumerate()
            .map(|(h, s)| s.norm().powf(1.0 / (h + 1) as f64))
            .sum();
        let radius = 2.1 * bound.max(1.0);
        let nodes = ((16.0 * radius).ceil() as usize).max(128).next_power_of_two();
        QuadratureSpec { radius, nodes }
    }

    pub fn nodes_iter(&self) -> impl Iterator<Item = Complex64> + '_ {
        let n = self.nodes;
        (0..n).map(move |j| Complex64::from_polar(self.radius, std::f64::consts::TAU * j as f64 / n as f64))
    }

    /// Checks `R > 0`, a power-of-two node count, and `|P_σ(ζ)/ζ^k − 1| < 1`
    /// at every node.
    pub fn validate(&self, sigma: &[Complex64]) -> Result<()> {
        check_finite(sigma)?;
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::Numeric(format!("radius {} must be positive", self.radius)));
        }
        if !self.nodes.is_power_of_two() {
            return Err(Error::Numeric(format!(
                "node count {} is not a power of two",
                self.nodes
            )));
        }
        let k = sigma.len() as i32;
        for z in self.nodes_iter() {
            let (p, _) = p_eval(sigma, z);
            if (p / z.powi(k) - 1.0).norm() >= 1.0 {
                return Err(Error::Numeric(format!(
                    "radius {} too small for the logarithm branch",
                    self.radius
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceValue {
    /// Integration-by-parts form with `Log(P_σ(ζ)/ζ^k)`.
    pub value: Complex64,
    /// Logarithmic-derivative form with `P'_σ/P_σ`.
    pub log_derivative_form: Complex64,
    pub difference: f64,
}

/// `Σ_j f(x_j)` over the roots of `P_σ`, by contour integration.
pub fn trace_contour(f: &dyn Analytic, sigma: &[Complex64], spec: &QuadratureSpec) -> Result<TraceValue> {
    spec.validate(sigma)?;
    let k = sigma.len();
    let n = spec.nodes as f64;
    let mut form7 = Complex64::new(0.0, 0.0);
    let mut form8 = Complex64::new(0.0, 0.0);
    for z in spec.nodes_iter() {
        let (p, dp) = p_eval(sigma, z);
        form7 += f.eval(z) * dp / p * z;
        form8 -= f.deriv(z) * (p / z.powi(k as i32)).ln() * z;
    }
    form7 /= n;
    let value = form8 / n + f.eval(Complex64::new(0.0, 0.0)) * k as f64;
    Ok(TraceValue {
        value,
        log_derivative_form: form7,
        difference: (value - form7).norm(),
    })
}

/// `(1/2πi) ∮ ζ^{m+k−1}/P_σ(ζ) dζ`.
pub fn dn_contour(m: i64, sigma: &[Complex64], spec: &QuadratureSpec) -> Result<Complex64> {
    let k = sigma.len() as i64;
    if m < -k + 1 {
        return Err(Error::OutOfRange(format!("DN_{m} needs m ≥ {}", -k + 1)));
    }
    spec.validate(sigma)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for z in spec.nodes_iter() {
        let (p, _) = p_eval(sigma, z);
        acc += z.powi((m + k) as i32) / p;
    }
    Ok(acc / spec.nodes as f64)
}

/// `Σ_j f(x_j)` over given roots.
pub fn root_sum(f: &dyn Analytic, roots: &[Complex64]) -> Complex64 {
    roots.iter().map(|&x| f.eval(x)).sum()
}

//! Roots of `P_σ(z) = z^k + Σ (−1)^h σ_h z^{k−h}`.

use num_complex::Complex64;

use super::check_finite;
use crate::error::{Error, Result};

const MAX_ITER: usize = 1000;
const POLISH_SWEEPS: usize = 64;

/// `(P_σ(z), P'_σ(z))` by Horner's rule.
pub fn p_eval(sigma: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(1.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for (h, s) in sigma.iter().enumerate() {
        let c = if h % 2 == 0 { -s } else { *s };
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn tolerance(z: Complex64, k: usize) -> f64 {
    1e-10 * z.norm().max(1.0).powi(k as i32)
}

/// All `k` roots with multiplicity, by Aberth–Ehrlich iteration.
pub fn poly_roots(sigma: &[Complex64]) -> Result<Vec<Complex64>> {
    let k = sigma.len();
    if k == 0 {
        return Err(Error::OutOfRange("root finding needs k ≥ 1".into()));
    }
    check_finite(sigma)?;
    if sigma.iter().all(|s| s.norm() == 0.0) {
        return Ok(vec![Complex64::new(0.0, 0.0); k]);
    }
    let bound = 1.0 + sigma.iter().map(|s| s.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..k)
        .map(|j| Complex64::from_polar(bound, 0.4 + std::f64::consts::TAU * j as f64 / k as f64))
        .collect();
    let mut best = f64::INFINITY;
    for _ in 0..MAX_ITER {
        let mut done = true;
        let mut worst = 0.0f64;
        for i in 0..k {
            let r = p_eval(sigma, z[i]).0.norm();
            worst = worst.max(r / tolerance(z[i], k));
            if r <= tolerance(z[i], k) {
                continue;
            }
            done = false;
            aberth_step(sigma, &mut z, i);
        }
        best = best.min(worst);
        if done {
            polish(sigma, &mut z);
            return Ok(z);
        }
    }
    Err(Error::NoConvergence { residual: best })
}

/// One Aberth update of `z[i]`; returns the step length.
fn aberth_step(sigma: &[Complex64], z: &mut [Complex64], i: usize) -> f64 {
    let (p, dp) = p_eval(sigma, z[i]);
    if p.norm() == 0.0 {
        return 0.0;
    }
    let ratio = p / dp;
    let repulsion: Complex64 = (0..z.len())
        .filter(|&j| j != i)
        .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
        .sum();
    let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
    if step.re.is_finite() && step.im.is_finite() {
        z[i] -= step;
        step.norm()
    } else {
        z[i] += Complex64::new(1e-8, 1e-8);
        1e-8
    }
}

/// Further sweeps over all roots until steps reach rounding level.
fn polish(sigma: &[Complex64], z: &mut [Complex64]) {
    for _ in 0..POLISH_SWEEPS {
        let mut moved = false;
        for i in 0..z.len() {
            let before = z[i];
            let step = aberth_step(sigma, z, i);
            moved |= step > 1e-15 * before.norm().max(1.0);
        }
        if !moved {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn sorted_re(mut v: Vec<Complex64>) -> Vec<f64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        v.into_iter().map(|z| z.re).collect()
    }

    #[test]
    fn simple_roots() {
        let r = sorted_re(poly_roots(&[c(3.0), c(2.0)]).unwrap());
        assert!((r[0] - 1.0).abs() < 1e-12 && (r[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_and_double() {
        assert!(poly_roots(&[c(0.0); 3]).unwrap().iter().all(|z| z.norm() == 0.0));
        let r = poly_roots(&[c(2.0), c(1.0)]).unwrap();
        assert!(r.iter().all(|z| (z - c(1.0)).norm() < 1e-4));
    }

    #[test]
    fn rejects_nan() {
        assert!(poly_roots(&[c(f64::NAN)]).is_err());
        assert!(poly_roots(&[]).is_err());
    }
}

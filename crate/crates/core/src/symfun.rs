//! Symmetric-function families in elementary symmetric coordinates.

use std::collections::BTreeMap;
use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::poly::{sigma, x, Exp, Poly};
use crate::rational::Rational;
use crate::space::{Var, VarSpace};

fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

fn sign(e: i64) -> Rational {
    if e.rem_euclid(2) == 0 {
        q(1)
    } else {
        q(-1)
    }
}

/// `σ_h` in `Sigma(k)`, with `σ_0 = 1`.
pub fn sigma0(k: usize, h: usize) -> Poly {
    if h == 0 {
        Poly::one(VarSpace::Sigma(k))
    } else {
        sigma(k, h)
    }
}

/// `e_h(x_1..x_k)`, with `e_0 = 1`.
pub fn elementary_symmetric(k: usize, h: usize) -> Result<Poly> {
    if h > k {
        return Err(Error::OutOfRange(format!("e_{h} with k = {k}")));
    }
    let space = VarSpace::X(k);
    let mut e = vec![Poly::one(space)];
    // coefficients of Π (1 + x_j T), built incrementally
    for j in 1..=k {
        let xj = x(k, j);
        let mut next = e.clone();
        next.push(Poly::zero(space));
        for i in 1..next.len() {
            next[i] = &next[i] + &(&e[i - 1] * &xj);
        }
        e = next;
    }
    Ok(e.swap_remove(h))
}

/// Images `σ_h ↦ e_h(x)` for composing σ-polynomials with the symmetric map.
pub fn sigma_images(k: usize) -> Vec<Poly> {
    (1..=k).map(|h| elementary_symmetric(k, h).expect("h ≤ k")).collect()
}

/// `f(e_1(x), .., e_k(x))`.
pub fn to_x(f: &Poly) -> Result<Poly> {
    let VarSpace::Sigma(k) = f.space() else {
        return Err(Error::SpaceMismatch(f.space(), VarSpace::Sigma(f.space().k())));
    };
    f.compose(&sigma_images(k), VarSpace::X(k))
}

/// First adjacent transposition `(i, i+1)` (1-based) that changes `p`.
pub fn symmetry_violation(p: &Poly) -> Option<(usize, usize)> {
    let k = p.space().nvars();
    (0..k.saturating_sub(1))
        .find(|&i| p.swap_vars(i, i + 1) != *p)
        .map(|i| (i + 1, i + 2))
}

/// Express a symmetric polynomial in `x_1..x_k` through `σ_1..σ_k`.
pub fn reduce_to_sigma(p: &Poly) -> Result<Poly> {
    let VarSpace::X(k) = p.space() else {
        return Err(Error::SpaceMismatch(p.space(), VarSpace::X(p.space().k())));
    };
    if let Some((a, b)) = symmetry_violation(p) {
        return Err(Error::NotSymmetric(a, b));
    }
    let es = sigma_images(k);
    let mut powers: Vec<Vec<Poly>> = es.iter().map(|e| vec![Poly::one(VarSpace::X(k)), e.clone()]).collect();
    let mut rest = p.clone();
    let mut out = Poly::zero(VarSpace::Sigma(k));
    while let Some((lead, c)) = rest.leading().map(|(e, c)| (e.clone(), c.clone())) {
        let mut gamma = Vec::with_capacity(k);
        for i in 0..k {
            let next = if i + 1 < k { lead.0[i + 1] } else { 0 };
            let d = lead.0[i]
                .checked_sub(next)
                .ok_or_else(|| Error::Internal(format!("leading exponent {:?} not decreasing", lead.0)))?;
            gamma.push(d);
        }
        let mut prod = Poly::constant(VarSpace::X(k), c.clone());
        for (i, &g) in gamma.iter().enumerate() {
            while powers[i].len() <= g as usize {
                let nx = powers[i].last().unwrap() * &es[i];
                powers[i].push(nx);
            }
            if g > 0 {
                prod = &prod * &powers[i][g as usize];
            }
        }
        rest = &rest - &prod;
        out.add_term(Exp(gamma), c);
    }
    Ok(out)
}

/// Cached `N_m`, `DN_m` and `PN_m` for one `k`. Safe to share between threads.
#[derive(Debug)]
pub struct NewtonFamily {
    k: usize,
    n: RwLock<Vec<Poly>>,
    dn: RwLock<Vec<Poly>>,
}

impl NewtonFamily {
    pub fn new(k: usize) -> Self {
        assert!(k >= 1, "k must be positive");
        let space = VarSpace::Sigma(k);
        NewtonFamily {
            k,
            n: RwLock::new(vec![Poly::int(space, k as i64)]),
            dn: RwLock::new(vec![Poly::one(space)]),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Power sum `N_m = Σ x_j^m` in σ.
    pub fn newton(&self, m: usize) -> Poly {
        if let Some(p) = self.n.read().unwrap().get(m) {
            return p.clone();
        }
        let mut cache = self.n.write().unwrap();
        while cache.len() <= m {
            let j = cache.len();
            let mut acc = Poly::zero(VarSpace::Sigma(self.k));
            for h in 1..=j.min(self.k) {
                let term = if h == j {
                    sigma(self.k, h).scale(&q(j as i64))
                } else {
                    &sigma(self.k, h) * &cache[j - h]
                };
                acc = &acc + &term.scale(&sign(h as i64 - 1));
            }
            cache.push(acc);
        }
        cache[m].clone()
    }

    /// `DN_m` for `m ≥ −k+1`.
    pub fn dnewton(&self, m: i64) -> Result<Poly> {
        let k = self.k as i64;
        if m < -k + 1 {
            return Err(Error::OutOfRange(format!("DN_{m} needs m ≥ {}", -k + 1)));
        }
        if m < 0 {
            return Ok(Poly::zero(VarSpace::Sigma(self.k)));
        }
        let m = m as usize;
        if let Some(p) = self.dn.read().unwrap().get(m) {
            return Ok(p.clone());
        }
        let mut cache = self.dn.write().unwrap();
        while cache.len() <= m {
            let j = cache.len();
            let mut acc = Poly::zero(VarSpace::Sigma(self.k));
            for h in 1..=j.min(self.k) {
                acc = &acc + &(&sigma(self.k, h) * &cache[j - h]).scale(&sign(h as i64 - 1));
            }
            cache.push(acc);
        }
        Ok(cache[m].clone())
    }

    /// `PN_m = Σ_h (−1)^{h−1} N_{m−h}/(m−h) σ_h` with `h ∈ [0, k]` for
    /// `m > k` and `h ∈ [0, m−1]` otherwise.
    pub fn pnewton(&self, m: usize) -> Result<Poly> {
        if m == 0 {
            return Err(Error::OutOfRange("PN_m needs m ≥ 1".into()));
        }
        let top = if m > self.k { self.k } else { m - 1 };
        let mut acc = Poly::zero(VarSpace::Sigma(self.k));
        for h in 0..=top {
            let c = sign(h as i64 - 1) * Rational::new(1, (m - h) as i64);
            acc = &acc + &(&self.newton(m - h) * &sigma0(self.k, h)).scale(&c);
        }
        Ok(acc)
    }
}

pub fn newton(k: usize, m: usize) -> Poly {
    NewtonFamily::new(k).newton(m)
}

pub fn derived_newton(k: usize, m: i64) -> Result<Poly> {
    NewtonFamily::new(k).dnewton(m)
}

pub fn primitive_newton(k: usize, m: usize) -> Result<Poly> {
    NewtonFamily::new(k).pnewton(m)
}

/// Closed-form power sum: `Σ_{||α||=m} (−1)^{m+|α|} m (|α|−1)!/α! σ^α`.
pub fn newton_varouchas(k: usize, m: usize) -> Result<Poly> {
    if m == 0 {
        return Err(Error::OutOfRange("the closed form needs m ≥ 1".into()));
    }
    let mut out = Poly::zero(VarSpace::Sigma(k));
    for alpha in weighted_partitions(k, m) {
        let e = Exp(alpha);
        let len = e.degree();
        let c = sign((m as i64) + len as i64) * q(m as i64) * Rational::factorial(len - 1) / e.factorial();
        out.add_term(e, c);
    }
    Ok(out)
}

/// All `α ∈ ℕ^k` with `Σ j·α_j = m`.
pub fn weighted_partitions(k: usize, m: usize) -> Vec<Vec<u32>> {
    fn rec(j: usize, k: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if j > k {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for a in 0..=left / j {
            cur.push(a as u32);
            rec(j + 1, k, left - a * j, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, k, m, &mut Vec::with_capacity(k), &mut out);
    out
}

/// `((k−h)!/k!) Σ_{i injective} p(x_{i_1}, .., x_{i_h})`.
pub fn symmetrize(p: &Poly, h: usize, k: usize) -> Result<Poly> {
    if h == 0 || h > k {
        return Err(Error::OutOfRange(format!("symmetrization with h = {h}, k = {k}")));
    }
    let n = match p.space() {
        VarSpace::X(n) => n,
        other => return Err(Error::SpaceMismatch(other, VarSpace::X(h))),
    };
    let mask: Vec<bool> = (0..n).map(|i| i < h).collect();
    if !p.uses_only(&mask) {
        return Err(Error::OutOfRange(format!("polynomial uses variables beyond x{h}")));
    }
    let target = VarSpace::X(k);
    let mut acc = Poly::zero(target);
    let mut count = 0u64;
    for inj in injections(h, k) {
        let images: Vec<Poly> = (0..n)
            .map(|i| if i < h { x(k, inj[i] + 1) } else { Poly::zero(target) })
            .collect();
        acc = &acc + &p.compose(&images, target)?;
        count += 1;
    }
    Ok(acc.scale(&Rational::new(1, count as i64)))
}

fn injections(h: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(h: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == h {
            out.push(cur.clone());
            return;
        }
        for j in 0..k {
            if !cur.contains(&j) {
                cur.push(j);
                rec(h, k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(h, k, &mut Vec::new(), &mut out);
    out
}

/// `Δ` with `Δ(σ(x)) = Π_{i<j} (x_i − x_j)²`, as the Hankel determinant
/// `det(N_{i+j})_{0 ≤ i,j < k}`.
pub fn discriminant(k: usize) -> Result<Poly> {
    if k < 2 {
        return Err(Error::OutOfRange(format!("discriminant needs k ≥ 2, got {k}")));
    }
    let fam = NewtonFamily::new(k);
    let m: Vec<Vec<Poly>> = (0..k).map(|i| (0..k).map(|j| fam.newton(i + j)).collect()).collect();
    Ok(determinant(&m, VarSpace::Sigma(k)))
}

/// Laplace expansion along the first row with memoized minors.
pub fn determinant(m: &[Vec<Poly>], space: VarSpace) -> Poly {
    fn rec(m: &[Vec<Poly>], row: usize, cols: u32, memo: &mut BTreeMap<u32, Poly>, space: VarSpace) -> Poly {
        let n = m.len();
        if row == n {
            return Poly::one(space);
        }
        if let Some(p) = memo.get(&cols) {
            return p.clone();
        }
        let mut acc = Poly::zero(space);
        let mut parity = 0;
        for c in 0..n {
            if cols & (1 << c) != 0 {
                continue;
            }
            if !m[row][c].is_zero() {
                let minor = rec(m, row + 1, cols | (1 << c), memo, space);
                let t = &m[row][c] * &minor;
                acc = if parity % 2 == 0 { &acc + &t } else { &acc - &t };
            }
            parity += 1;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    rec(m, 0, 0, &mut BTreeMap::new(), space)
}

/// Cross-partial test for `Ω_m = Σ_h (−1)^{h−1} N_{m−h}/(m−h) dσ_h`.
pub fn omega_closedness(k: usize, m: usize) -> Result<bool> {
    if m < k + 1 {
        return Err(Error::OutOfRange(format!("Ω_m needs m ≥ k+1, got m = {m}, k = {k}")));
    }
    let fam = NewtonFamily::new(k);
    let coef = |h: usize| {
        fam.newton(m - h)
            .scale(&(sign(h as i64 - 1) * Rational::new(1, (m - h) as i64)))
    };
    for p in 1..=k {
        for qq in p + 1..=k {
            let a = coef(qq).partial(Var::sigma(p))?;
            let b = coef(p).partial(Var::sigma(qq))?;
            if a != b {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `P_σ(z) = z^k + Σ (−1)^h σ_h z^{k−h}` in `Aux(k)` (`t` plays `z`).
pub fn p_sigma(k: usize) -> Poly {
    let space = VarSpace::Aux(k);
    let mut out = Poly::zero(space);
    for h in 0..=k {
        let mut e = vec![0; k + 1];
        e[k] = (k - h) as u32;
        if h > 0 {
            e[h - 1] = 1;
        }
        out.add_term(Exp(e), sign(h as i64));
    }
    out
}

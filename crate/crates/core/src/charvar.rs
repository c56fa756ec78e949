//! Symbol-level geometry of the characteristic variety `Z`.
//!
//! `Z ⊂ {(σ, η)}` is cut out by the 2×2 minors of the `k×2` matrix whose
//! `h`-th row is `(η_h, η_{h−1})`, with `η_0 := −l_σ(η)` and
//! `l_σ(η) = Σ σ_h η_h`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Exp, Poly};
use crate::rational::Rational;
use crate::space::VarSpace;
use crate::symfun::{discriminant, p_sigma};
use crate::transport::theta;

pub type MinorId = (usize, usize);

fn mixed(k: usize) -> VarSpace {
    VarSpace::Mixed(k)
}

/// `η_h` in `Mixed(k)`.
pub fn eta(k: usize, h: usize) -> Poly {
    assert!((1..=k).contains(&h), "η index {h} out of range");
    Poly::var_at(mixed(k), k + h - 1)
}

/// `σ_h` in `Mixed(k)`.
pub fn sigma_m(k: usize, h: usize) -> Poly {
    assert!((1..=k).contains(&h), "σ index {h} out of range");
    Poly::var_at(mixed(k), h - 1)
}

/// `l_σ(η) = Σ_h σ_h η_h`.
pub fn l_sigma(k: usize) -> Poly {
    (1..=k).fold(Poly::zero(mixed(k)), |acc, h| &acc + &(&sigma_m(k, h) * &eta(k, h)))
}

/// Row entry `η_h`, with `η_0 = −l_σ(η)`.
fn row(k: usize, h: usize) -> Poly {
    if h == 0 {
        -l_sigma(k)
    } else {
        eta(k, h)
    }
}

/// `m_(i,j) = η_i η_{j−1} − η_{i−1} η_j`, `1 ≤ i < j ≤ k`.
pub fn minor(k: usize, i: usize, j: usize) -> Result<Poly> {
    if !(1 <= i && i < j && j <= k) {
        return Err(Error::OutOfRange(format!("minor ({i},{j}) with k = {k}")));
    }
    Ok(&(&row(k, i) * &row(k, j - 1)) - &(&row(k, i - 1) * &row(k, j)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorSet {
    pub k: usize,
    pub minors: Vec<(MinorId, Poly)>,
}

impl MinorSet {
    pub fn get(&self, id: MinorId) -> Option<&Poly> {
        self.minors.iter().find(|(m, _)| *m == id).map(|(_, p)| p)
    }
}

/// All `k(k−1)/2` minors ordered by `(i, j)`.
pub fn minors(k: usize) -> Result<MinorSet> {
    if k < 2 {
        return Err(Error::OutOfRange(format!("minors need k ≥ 2, got {k}")));
    }
    let mut out = Vec::new();
    for i in 1..=k {
        for j in i + 1..=k {
            out.push(((i, j), minor(k, i, j)?));
        }
    }
    Ok(MinorSet { k, minors: out })
}

/// `η_i η_j = Σ_α u_α m_α + η_k v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaRewrite {
    pub coeffs: BTreeMap<MinorId, Poly>,
    pub v: Poly,
}

impl EtaRewrite {
    pub fn recombine(&self, k: usize) -> Result<Poly> {
        let mut out = &eta(k, k) * &self.v;
        for (&(i, j), u) in &self.coeffs {
            out = &out + &(u * &minor(k, i, j)?);
        }
        Ok(out)
    }
}

fn add_into(map: &mut BTreeMap<MinorId, Poly>, id: MinorId, p: Poly) {
    if p.is_zero() {
        return;
    }
    let slot = map.entry(id).or_insert_with(|| Poly::zero(p.space()));
    *slot = &*slot + &p;
    if slot.is_zero() {
        map.remove(&id);
    }
}

/// Rewrites `η_i η_j` by raising the larger index until it reaches `k`:
/// `η_1 η_b = m_(1,b+1) − Σ_p σ_p η_p η_{b+1}` and
/// `η_a η_b = m_(a,b+1) + η_{a−1} η_{b+1}` for `2 ≤ a ≤ b < k`.
pub fn rewrite_eta_product(k: usize, i: usize, j: usize) -> Result<EtaRewrite> {
    if !(1..=k).contains(&i) || !(1..=k).contains(&j) {
        return Err(Error::OutOfRange(format!("η_{i} η_{j} with k = {k}")));
    }
    let mut memo = BTreeMap::new();
    Ok(rewrite_rec(k, i.min(j), i.max(j), &mut memo))
}

fn rewrite_rec(k: usize, a: usize, b: usize, memo: &mut BTreeMap<MinorId, EtaRewrite>) -> EtaRewrite {
    if let Some(r) = memo.get(&(a, b)) {
        return r.clone();
    }
    let space = mixed(k);
    let out = if b == k {
        EtaRewrite {
            coeffs: BTreeMap::new(),
            v: eta(k, a),
        }
    } else if a == 1 {
        let mut coeffs = BTreeMap::new();
        coeffs.insert((1, b + 1), Poly::one(space));
        let mut v = Poly::zero(space);
        for p in 1..=k {
            let sub = rewrite_rec(k, p.min(b + 1), p.max(b + 1), memo);
            let s = -sigma_m(k, p);
            for (id, u) in &sub.coeffs {
                add_into(&mut coeffs, *id, &s * u);
            }
            v = &v + &(&s * &sub.v);
        }
        EtaRewrite { coeffs, v }
    } else {
        let sub = rewrite_rec(k, a - 1, b + 1, memo);
        let mut coeffs = sub.coeffs.clone();
        add_into(&mut coeffs, (a, b + 1), Poly::one(space));
        EtaRewrite { coeffs, v: sub.v }
    };
    memo.insert((a, b), out.clone());
    out
}

fn eta_mask(k: usize) -> Vec<bool> {
    (0..2 * k).map(|p| p >= k).collect()
}

/// η-degree of a homogeneous polynomial; `None` if zero or inhomogeneous.
pub fn eta_degree(f: &Poly) -> Option<u32> {
    let parts = f.homogeneous_parts(&eta_mask(f.space().k()));
    if parts.len() == 1 {
        parts.keys().next().copied()
    } else {
        None
    }
}

/// Decides whether `f(σ, η)` vanishes identically on `Z`.
///
/// Each η-homogeneous part is pulled back along the chart
/// `η_h = t^{k−h}`, `σ_k = −(t^k + Σ_{h<k} σ_h t^{k−h})`, which is dense in
/// `Z` up to scaling of `η`.
pub fn vanishes_on_z(f: &Poly) -> Result<bool> {
    let VarSpace::Mixed(k) = f.space() else {
        return Err(Error::SpaceMismatch(f.space(), VarSpace::Mixed(f.space().k())));
    };
    let images = chart_images(k);
    for part in f.homogeneous_parts(&eta_mask(k)).values() {
        if !part.compose(&images, VarSpace::Aux(k))?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn chart_images(k: usize) -> Vec<Poly> {
    let aux = VarSpace::Aux(k);
    let t = Poly::var_at(aux, k);
    let mut images: Vec<Poly> = (0..k - 1).map(|h| Poly::var_at(aux, h)).collect();
    let mut sk = t.pow(k as u32);
    for h in 1..k {
        sk = &sk + &(&Poly::var_at(aux, h - 1) * &t.pow((k - h) as u32));
    }
    images.push(-sk);
    for h in 1..=k {
        images.push(t.pow((k - h) as u32));
    }
    images
}

/// Coefficients `c_α` with `f = Σ c_α m_α`, for `f` vanishing on `Z`.
pub fn decompose_in_minors(f: &Poly) -> Result<BTreeMap<MinorId, Poly>> {
    let VarSpace::Mixed(k) = f.space() else {
        return Err(Error::SpaceMismatch(f.space(), VarSpace::Mixed(f.space().k())));
    };
    if !vanishes_on_z(f)? {
        return Err(Error::NotOnVariety);
    }
    let mut out = BTreeMap::new();
    for (d, part) in f.homogeneous_parts(&eta_mask(k)) {
        decompose_homogeneous(k, &part, d, &mut out)?;
    }
    Ok(out)
}

fn decompose_homogeneous(k: usize, f: &Poly, d: u32, out: &mut BTreeMap<MinorId, Poly>) -> Result<()> {
    if f.is_zero() {
        return Ok(());
    }
    if d <= 1 {
        return Err(Error::Internal(format!(
            "nonzero η-degree {d} remainder vanishing on Z: {f}"
        )));
    }
    let space = mixed(k);
    let eta_k = k + k - 1;
    let mut memo = BTreeMap::new();
    let mut local: BTreeMap<MinorId, Poly> = BTreeMap::new();
    let mut g = Poly::zero(space);
    for (e, c) in f.terms() {
        if e.0[eta_k] > 0 {
            let mut rest = e.clone();
            rest.0[eta_k] -= 1;
            g.add_term(rest, c.clone());
            continue;
        }
        let mut idx = (k..2 * k).flat_map(|p| std::iter::repeat_n(p, e.0[p] as usize));
        let (a, b) = (idx.next().unwrap() - k + 1, idx.next().unwrap() - k + 1);
        let mut rest = e.clone();
        rest.0[k + a - 1] -= 1;
        rest.0[k + b - 1] -= 1;
        let r = Poly::monomial(space, rest, c.clone());
        let rw = rewrite_rec(k, a, b, &mut memo);
        for (id, u) in &rw.coeffs {
            add_into(&mut local, *id, &r * u);
        }
        g = &g + &(&r * &rw.v);
    }
    // f − Σ local·m = η_k·g; recurse on g and multiply its cofactors by η_k.
    let mut inner = BTreeMap::new();
    decompose_homogeneous(k, &g, d - 1, &mut inner)?;
    let ek = eta(k, k);
    for (id, c) in inner {
        add_into(&mut local, id, &ek * &c);
    }
    for (id, c) in local {
        add_into(out, id, c);
    }
    Ok(())
}

/// `Σ c_α m_α`.
pub fn recombine_minors(k: usize, coeffs: &BTreeMap<MinorId, Poly>) -> Result<Poly> {
    let mut out = Poly::zero(mixed(k));
    for (&(i, j), c) in coeffs {
        out = &out + &(c * &minor(k, i, j)?);
    }
    Ok(out)
}

/// A sampled point of `Z` with its parametrization data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZPoint {
    pub sigma: Vec<Rational>,
    pub eta: Vec<Rational>,
    pub s: Vec<Rational>,
    pub zeta0: Rational,
    pub zeta1: Rational,
}

impl ZPoint {
    /// Point in `Mixed(k)` coordinates.
    pub fn coords(&self) -> Vec<Rational> {
        self.sigma.iter().chain(&self.eta).cloned().collect()
    }

    pub fn l_sigma(&self) -> Rational {
        self.sigma.iter().zip(&self.eta).map(|(s, e)| s * e).sum()
    }

    /// `P_σ(l_σ(η)/η_1)`.
    pub fn root_residual(&self) -> Rational {
        let k = self.sigma.len();
        let z = self.l_sigma() / self.eta[0].clone();
        let mut pt = self.sigma.clone();
        pt.push(z);
        p_sigma(k).eval(&pt)
    }

    /// `η_h = η_1 (−η_1/l_σ(η))^{h−1}` for every `h`.
    pub fn geometric_progression(&self) -> bool {
        let l = self.l_sigma();
        if l.is_zero() {
            return false;
        }
        let ratio = -(self.eta[0].clone() / l);
        self.eta
            .iter()
            .enumerate()
            .all(|(h, e)| *e == &self.eta[0] * &ratio.pow(h as u32))
    }
}

/// Draws points `Φ(s, 1, t)` with integer `t ≠ 0`, `s_1..s_{k−1} ∈ [−10, 10]`
/// and `s_k` solved from `Σ_{h=0}^k (−1)^h s_h t^{k−h} = 0` (`s_0 = 1`).
pub fn sample_z_points(k: usize, seed: u64, n: usize) -> Result<Vec<ZPoint>> {
    if k < 1 || n < 1 {
        return Err(Error::OutOfRange(format!(
            "sampling needs k ≥ 1 and n ≥ 1, got k = {k}, n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let t: i64 = rng.gen_range(-10..=10);
        if t == 0 {
            continue;
        }
        let mut s: Vec<Rational> = (1..k).map(|_| Rational::from_int(rng.gen_range(-10..=10))).collect();
        let t = Rational::from_int(t);
        let sign = |h: usize| {
            if h.is_multiple_of(2) {
                Rational::one()
            } else {
                Rational::from_int(-1)
            }
        };
        let mut acc = t.pow(k as u32);
        for h in 1..k {
            acc += &(sign(h) * s[h - 1].clone() * t.pow((k - h) as u32));
        }
        s.push(-(acc * sign(k)));
        let sigma: Vec<Rational> = (1..=k).map(|h| sign(h) * s[h - 1].clone()).collect();
        let eta: Vec<Rational> = (1..=k).map(|h| t.pow((k - h) as u32)).collect();
        out.push(ZPoint {
            sigma,
            eta,
            s,
            zeta0: Rational::one(),
            zeta1: t,
        });
    }
    Ok(out)
}

/// Summary of the checks run at sampled points.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZPointStats {
    pub samples: usize,
    pub minors_vanish: usize,
    pub l_nonzero: usize,
    pub progression: usize,
    pub root: usize,
    pub generic: usize,
}

pub fn check_z_points(k: usize, points: &[ZPoint]) -> Result<ZPointStats> {
    let ms = minors(k)?;
    let disc = discriminant(k)?;
    let mut st = ZPointStats {
        samples: points.len(),
        ..Default::default()
    };
    for p in points {
        let c = p.coords();
        st.minors_vanish += ms.minors.iter().all(|(_, m)| m.eval(&c).is_zero()) as usize;
        st.l_nonzero += !p.l_sigma().is_zero() as usize;
        st.progression += p.geometric_progression() as usize;
        st.root += p.root_residual().is_zero() as usize;
        st.generic += !(disc.eval(&p.sigma) * p.eta[0].clone()).is_zero() as usize;
    }
    Ok(st)
}

/// Both sides of the contraction identity at `η_h = a^{h−1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    /// `Σ_h Θ_h(z, σ) η_h`
    pub lhs: Rational,
    /// `−(−a)^k/(1+az)·(P_σ(z) − P_σ(−1/a))`, or `z^{1−k} P'_σ(z)` when `az = −1`.
    pub closed_form: Rational,
    /// The same expressions with the opposite sign, resp. `z^{−k} P'_σ(z)`.
    pub alternative: Rational,
}

pub fn theta_contraction(k: usize, sigma: &[Rational], a: &Rational, z: &Rational) -> Result<Contraction> {
    if a.is_zero() {
        return Err(Error::OutOfRange("contraction needs a ≠ 0".into()));
    }
    if sigma.len() != k {
        return Err(Error::OutOfRange(format!(
            "σ has {} entries, expected {k}",
            sigma.len()
        )));
    }
    let mut pt = sigma.to_vec();
    pt.push(z.clone());
    let mut lhs = Rational::zero();
    for h in 1..=k {
        lhs += &(theta(k, h)?.eval(&pt) * a.pow((h - 1) as u32));
    }
    let p = p_sigma(k);
    let eval_p = |w: &Rational| {
        let mut pt = sigma.to_vec();
        pt.push(w.clone());
        p.eval(&pt)
    };
    let one_plus = Rational::one() + a * z;
    let (closed_form, alternative) = if one_plus.is_zero() {
        let dp = p.partial_at(k);
        let mut pt = sigma.to_vec();
        pt.push(z.clone());
        let d = dp.eval(&pt);
        (z.powi(1 - k as i32)? * d.clone(), z.powi(-(k as i32))? * d)
    } else {
        let w = -a.recip()?;
        let base = (-a).pow(k as u32) / one_plus * (eval_p(z) - eval_p(&w));
        (-base.clone(), base)
    };
    Ok(Contraction {
        lhs,
        closed_form,
        alternative,
    })
}

pub fn theta_contraction_check(k: usize, sigma: &[Rational], a: &Rational, z: &Rational) -> Result<bool> {
    let c = theta_contraction(k, sigma, a, z)?;
    Ok(c.lhs == c.closed_form)
}

/// Exponent vector of `η^β` in `Mixed(k)`.
pub fn eta_exp(k: usize, beta: &[u32]) -> Exp {
    let mut e = vec![0; 2 * k];
    e[k..].copy_from_slice(beta);
    Exp(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn minor_examples() {
        let m2 = minors(2).unwrap();
        assert_eq!(m2.minors.len(), 1);
        let expect = &eta(2, 1).pow(2) + &(&l_sigma(2) * &eta(2, 2));
        assert_eq!(m2.get((1, 2)).unwrap(), &expect);
        let m3 = minors(3).unwrap();
        assert_eq!(
            m3.get((2, 3)).unwrap(),
            &(&eta(3, 2).pow(2) - &(&eta(3, 1) * &eta(3, 3)))
        );
        assert!(minors(1).is_err());
    }

    #[test]
    fn rewrite_examples() {
        let r = rewrite_eta_product(2, 1, 1).unwrap();
        assert_eq!(r.coeffs.get(&(1, 2)).unwrap(), &Poly::one(mixed(2)));
        let v = -(&(&sigma_m(2, 1) * &eta(2, 1)) + &(&sigma_m(2, 2) * &eta(2, 2)));
        assert_eq!(r.v, v);
        let r = rewrite_eta_product(3, 3, 3).unwrap();
        assert!(r.coeffs.is_empty());
        assert_eq!(r.v, eta(3, 3));
        for k in 2..=4 {
            for i in 1..=k {
                for j in 1..=k {
                    let r = rewrite_eta_product(k, i, j).unwrap();
                    assert_eq!(r.recombine(k).unwrap(), &eta(k, i) * &eta(k, j));
                }
            }
        }
    }

    #[test]
    fn vanishing() {
        for (_, m) in minors(3).unwrap().minors {
            assert!(vanishes_on_z(&m).unwrap());
        }
        assert!(!vanishes_on_z(&(&eta(2, 1) * &eta(2, 2))).unwrap());
        let m = minor(3, 1, 3).unwrap();
        assert!(vanishes_on_z(&(&m * &(&sigma_m(3, 2) + &eta(3, 1)))).unwrap());
        assert!(!vanishes_on_z(&sigma_m(2, 1)).unwrap());
        assert!(vanishes_on_z(&Poly::zero(mixed(2))).unwrap());
    }

    #[test]
    fn decompose_examples() {
        let m = minor(2, 1, 2).unwrap();
        let d = decompose_in_minors(&m).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[&(1, 2)], Poly::one(mixed(2)));
        assert_eq!(
            decompose_in_minors(&(&eta(2, 1) * &eta(2, 2))).unwrap_err(),
            Error::NotOnVariety
        );
        let k = 3;
        let f = &(&eta(k, 2) * &minor(k, 1, 2).unwrap()) - &(&(&eta(k, 1) * &sigma_m(k, 3)) * &minor(k, 2, 3).unwrap());
        let d = decompose_in_minors(&f).unwrap();
        assert_eq!(recombine_minors(k, &d).unwrap(), f);
    }

    #[test]
    fn hand_sample() {
        // t = 2, s1 = 3 at k = 2
        let t = q(2);
        let s1 = q(3);
        let s2 = -(t.pow(2) - s1.clone() * t.clone());
        let p = ZPoint {
            sigma: vec![-s1.clone(), s2.clone()],
            eta: vec![t.clone(), q(1)],
            s: vec![s1, s2],
            zeta0: q(1),
            zeta1: t,
        };
        assert_eq!(p.sigma, vec![q(-3), q(2)]);
        assert!(minor(2, 1, 2).unwrap().eval(&p.coords()).is_zero());
        assert_eq!(p.l_sigma() / p.eta[0].clone(), q(-2));
        assert!(p.root_residual().is_zero());
    }

    #[test]
    fn sampled_points() {
        let pts = sample_z_points(3, 7, 50).unwrap();
        let st = check_z_points(3, &pts).unwrap();
        assert_eq!(st.minors_vanish, 50);
        assert_eq!(st.l_nonzero, 50);
        assert_eq!(st.progression, 50);
        assert_eq!(st.root, 50);
        assert_eq!(sample_z_points(3, 7, 50).unwrap(), pts);
    }

    #[test]
    fn contraction() {
        let c = theta_contraction(2, &[q(3), q(2)], &q(1), &q(5)).unwrap();
        assert_eq!(c.lhs, q(-1));
        assert_eq!(c.closed_form, q(-1));
        assert_eq!(c.alternative, q(1));
        let c = theta_contraction(2, &[q(3), q(2)], &q(1), &q(-1)).unwrap();
        assert_eq!(c.lhs, c.closed_form);
        assert_ne!(c.lhs, c.alternative);
        // roots 1 and 2: z = 1, a = −1/2
        assert!(theta_contraction(2, &[q(3), q(2)], &Rational::new(-1, 2), &q(1))
            .unwrap()
            .lhs
            .is_zero());
        // double root 1: z = 1, a = −1
        assert!(theta_contraction(2, &[q(2), q(1)], &q(-1), &q(1))
            .unwrap()
            .lhs
            .is_zero());
        assert!(theta_contraction(2, &[q(3), q(2)], &q(0), &q(1)).is_err());
    }
}

//! Transport of symmetric operators from root coordinates `x` to elementary
//! symmetric coordinates `σ`.

use crate::error::{Error, Result};
use crate::poly::{x, Exp, Poly};
use crate::rational::Rational;
use crate::space::VarSpace;
use crate::symfun::{elementary_symmetric, reduce_to_sigma, sigma_images};
use crate::weyl::WeylOp;

/// `Θ_h(z, σ) = Σ_{p<h} (−z)^{h−p−1} σ_p` in `Aux(k)`, with `z` the variable `t`.
pub fn theta(k: usize, h: usize) -> Result<Poly> {
    if !(1..=k).contains(&h) {
        return Err(Error::OutOfRange(format!("Θ_{h} with k = {k}")));
    }
    let space = VarSpace::Aux(k);
    let mut out = Poly::zero(space);
    for p in 0..h {
        let mut e = vec![0; k + 1];
        let d = h - p - 1;
        e[k] = d as u32;
        if p > 0 {
            e[p - 1] = 1;
        }
        let c = if d.is_multiple_of(2) {
            Rational::one()
        } else {
            Rational::from_int(-1)
        };
        out.add_term(Exp(e), c);
    }
    Ok(out)
}

/// `∂s_h/∂x_j = Σ_{q<h} s_{h−q−1}(x) (−x_j)^q`.
pub fn jacobian_entry(k: usize, h: usize, j: usize) -> Result<Poly> {
    if !(1..=k).contains(&h) || !(1..=k).contains(&j) {
        return Err(Error::OutOfRange(format!("Jacobian entry ({h}, {j}) with k = {k}")));
    }
    let mxj = -x(k, j);
    let mut out = Poly::zero(VarSpace::X(k));
    for q in 0..h {
        out = &out + &(&elementary_symmetric(k, h - q - 1)? * &mxj.pow(q as u32));
    }
    Ok(out)
}

/// An operator in `x` invariant under every permutation of the coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricOperator {
    op: WeylOp,
}

impl SymmetricOperator {
    pub fn new(op: WeylOp) -> Result<Self> {
        if !matches!(op.space(), VarSpace::X(_)) {
            return Err(Error::SpaceMismatch(op.space(), VarSpace::X(op.k())));
        }
        let k = op.k();
        for i in 0..k.saturating_sub(1) {
            if op.swap_coords(i, i + 1) != op {
                return Err(Error::NotSymmetricOperator(i + 1, i + 2));
            }
        }
        Ok(SymmetricOperator { op })
    }

    pub fn op(&self) -> &WeylOp {
        &self.op
    }

    pub fn k(&self) -> usize {
        self.op.k()
    }

    pub fn into_inner(self) -> WeylOp {
        self.op
    }
}

/// Apply a coordinate permutation: `x_i ↦ x_{perm[i]}` and likewise for `∂`.
pub fn permute_operator(op: &WeylOp, perm: &[usize]) -> WeylOp {
    let space = op.space();
    let mut out = WeylOp::zero(space);
    for (beta, a) in op.terms() {
        let mut nb = vec![0; beta.len()];
        for (i, &b) in beta.0.iter().enumerate() {
            nb[perm[i]] = b;
        }
        out.add_term(Exp(nb), a.relabel(space, perm));
    }
    out
}

/// Average over all coordinate permutations.
pub fn symmetrize_operator(op: &WeylOp) -> Result<SymmetricOperator> {
    let k = op.k();
    let mut acc = WeylOp::zero(op.space());
    let mut n = 0i64;
    for perm in permutations(k) {
        acc = acc.checked_add(&permute_operator(op, &perm))?;
        n += 1;
    }
    SymmetricOperator::new(acc.scale(&Rational::new(1, n)))
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in 0..k {
            if !cur.contains(&j) {
                cur.push(j);
                rec(k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(k, &mut Vec::new(), &mut out);
    out
}

/// `S_h = Σ_{i_1<…<i_h} ∂_{x_{i_1}}⋯∂_{x_{i_h}}`.
pub fn elementary_symmetric_op(k: usize, h: usize) -> Result<SymmetricOperator> {
    if !(1..=k).contains(&h) {
        return Err(Error::OutOfRange(format!("S_{h} with k = {k}")));
    }
    let space = VarSpace::X(k);
    let mut op = WeylOp::zero(space);
    for mask in 0u32..(1 << k) {
        if mask.count_ones() as usize == h {
            let beta = Exp((0..k).map(|i| (mask >> i) & 1).collect());
            op.add_term(beta, Poly::one(space));
        }
    }
    SymmetricOperator::new(op)
}

/// `U_p = Σ_j x_j^p ∂_{x_j}`.
pub fn u_op(k: usize, p: u32) -> WeylOp {
    let mut op = WeylOp::zero(VarSpace::X(k));
    for j in 1..=k {
        op.add_term(Exp::unit(k, j - 1), x(k, j).pow(p));
    }
    op
}

/// `s(x)^γ = Π_h e_h(x)^{γ_h}`.
fn s_power(es: &[Poly], gamma: &Exp) -> Poly {
    let k = es.len();
    let mut out = Poly::one(VarSpace::X(k));
    for (h, &g) in gamma.0.iter().enumerate() {
        if g > 0 {
            out = &out * &es[h].pow(g);
        }
    }
    out
}

/// `σ^γ` in `Sigma(k)`.
fn sigma_monomial(k: usize, gamma: &Exp) -> Poly {
    Poly::monomial(VarSpace::Sigma(k), gamma.clone(), Rational::one())
}

/// All exponents of length `k` and degree at most `d`, ascending.
pub fn exponents_up_to(k: usize, d: u32) -> Vec<Exp> {
    let mut out = Vec::new();
    fn rec(k: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Exp>) {
        if cur.len() == k {
            out.push(Exp(cur.clone()));
            return;
        }
        for a in 0..=left {
            cur.push(a);
            rec(k, left - a, cur, out);
            cur.pop();
        }
    }
    rec(k, d, &mut Vec::with_capacity(k), &mut out);
    out.sort();
    out
}

/// `Ξ(P)`: the operator `Q` in `σ` with `Q[F] ∘ s = P[F ∘ s]` for every `F`.
///
/// `Q` is recovered from its action on the monomials `σ^γ`, `|γ| ≤ order(P)`,
/// by the triangular system `γ!·a_γ = R_γ − Σ_{β<γ} a_β ∂^β σ^γ`.
pub fn xi_transport(p: &SymmetricOperator) -> Result<WeylOp> {
    let k = p.k();
    let space = VarSpace::Sigma(k);
    let es = sigma_images(k);
    let mut q = WeylOp::zero(space);
    for gamma in exponents_up_to(k, p.op().order()) {
        let image = p.op().apply(&s_power(&es, &gamma))?;
        let r = reduce_to_sigma(&image)?;
        let partial = q.apply(&sigma_monomial(k, &gamma))?;
        let a = (&r - &partial).scale(&gamma.factorial().recip()?);
        q.add_term(gamma, a);
    }
    Ok(q)
}

/// Checks `Q[σ^γ] = reduce(P[s^γ])` for all `|γ| ≤ max_degree`.
pub fn xi_defining_check(p: &SymmetricOperator, q: &WeylOp, max_degree: u32) -> Result<bool> {
    let k = p.k();
    let es = sigma_images(k);
    for gamma in exponents_up_to(k, max_degree) {
        let lhs = q.apply(&sigma_monomial(k, &gamma))?;
        let rhs = reduce_to_sigma(&p.op().apply(&s_power(&es, &gamma))?)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Push a cotangent polynomial in `(x, ξ)` to `(σ, η)` through
/// `ξ_i ↦ Σ_h (∂s_h/∂x_i) η_h`, then reduce the symmetric `x`-coefficients.
pub fn cotangent_transport(sym: &Poly) -> Result<Poly> {
    let VarSpace::XiMixed(k) = sym.space() else {
        return Err(Error::SpaceMismatch(sym.space(), VarSpace::XiMixed(sym.space().k())));
    };
    // Work in XiMixed with the ξ slots standing for η.
    let work = VarSpace::XiMixed(k);
    let xpos: Vec<usize> = (0..k).collect();
    let mut images: Vec<Poly> = (0..k).map(|i| Poly::var_at(work, i)).collect();
    for i in 1..=k {
        let mut img = Poly::zero(work);
        for h in 1..=k {
            let j = jacobian_entry(k, h, i)?.relabel(work, &xpos);
            img = &img + &(&j * &Poly::var_at(work, k + h - 1));
        }
        images.push(img);
    }
    let pushed = sym.compose(&images, work)?;
    let mask: Vec<bool> = (0..2 * k).map(|p| p >= k).collect();
    let back: Vec<usize> = (0..k).chain(0..k).collect();
    let target = VarSpace::Mixed(k);
    let mut out = Poly::zero(target);
    for (eta_mono, coeff) in pushed.split_by(&mask) {
        let reduced = reduce_to_sigma(&coeff.relabel(VarSpace::X(k), &back))?;
        let lifted = reduced.embed_sigma(target);
        out = &out + &lifted.mul_monomial(&eta_mono, &Rational::one());
    }
    Ok(out)
}

/// Coefficients `b_p(σ)` with `d = Σ_p b_p(σ(x)) U_p`, `p < k`.
pub fn decompose_derivation(d: &SymmetricOperator) -> Result<Vec<(usize, Poly)>> {
    let op = d.op();
    let k = d.k();
    if op.is_zero() {
        return Ok(Vec::new());
    }
    if op.order() != 1 {
        return Err(Error::NotDerivation(format!("order {} operator", op.order())));
    }
    if !op.coeff(&Exp::zero(k)).is_zero() {
        return Err(Error::NotDerivation("nonzero order-0 part".into()));
    }
    let c1 = op.coeff(&Exp::unit(k, 0));
    let aux = VarSpace::Aux(k);
    let t = Poly::var_at(aux, k);
    // x_1 ↦ t; coefficients symmetric in x_2..x_k go through τ_h = Σ_q σ_{h−q}(−t)^q.
    let mut mask = vec![false; k];
    mask[0] = true;
    let mut in_aux = Poly::zero(aux);
    for (x1_mono, rest) in c1.split_by(&mask) {
        let tpow = t.pow(x1_mono.0[0]);
        let coeff = if k == 1 {
            Poly::constant(aux, rest.constant_term())
        } else {
            let shifted: Vec<usize> = std::iter::once(0).chain(0..k - 1).collect();
            let g = reduce_to_sigma(&rest.relabel(VarSpace::X(k - 1), &shifted))?;
            let taus: Vec<Poly> = (1..k).map(|h| tau_image(k, h)).collect();
            g.compose(&taus, aux)?
        };
        in_aux = &in_aux + &(&coeff * &tpow);
    }
    let reduced = reduce_t_degree(&in_aux, k);
    let tmask: Vec<bool> = (0..=k).map(|p| p == k).collect();
    let sig: Vec<usize> = (0..k).chain(std::iter::once(0)).collect();
    let mut out: Vec<(usize, Poly)> = reduced
        .split_by(&tmask)
        .into_iter()
        .map(|(e, c)| (e.0[k] as usize, c.relabel(VarSpace::Sigma(k), &sig)))
        .collect();
    out.sort_by_key(|(p, _)| *p);
    let rebuilt = out.iter().try_fold(WeylOp::zero(VarSpace::X(k)), |acc, (p, b)| {
        let bx = b.compose(&sigma_images(k), VarSpace::X(k))?;
        acc.checked_add(&u_op(k, *p as u32).left_mul_poly(&bx)?)
    })?;
    if rebuilt != *op {
        return Err(Error::Internal("derivation decomposition does not recombine".into()));
    }
    Ok(out)
}

/// `e_h(x_2..x_k) = Σ_{q≤h} σ_{h−q} (−t)^q` in `Aux(k)`, `t = x_1`.
fn tau_image(k: usize, h: usize) -> Poly {
    let aux = VarSpace::Aux(k);
    let mut out = Poly::zero(aux);
    for q in 0..=h {
        let mut e = vec![0; k + 1];
        e[k] = q as u32;
        if h - q > 0 {
            e[h - q - 1] = 1;
        }
        let c = if q % 2 == 0 {
            Rational::one()
        } else {
            Rational::from_int(-1)
        };
        out.add_term(Exp(e), c);
    }
    out
}

/// Reduce powers `t^{≥k}` with `t^k = Σ_h (−1)^{h−1} σ_h t^{k−h}`.
pub fn reduce_t_degree(p: &Poly, k: usize) -> Poly {
    let aux = VarSpace::Aux(k);
    let mut rel = Poly::zero(aux);
    for h in 1..=k {
        let mut e = vec![0; k + 1];
        e[h - 1] = 1;
        e[k] = (k - h) as u32;
        let c = if h % 2 == 1 {
            Rational::one()
        } else {
            Rational::from_int(-1)
        };
        rel.add_term(Exp(e), c);
    }
    let mut cur = p.clone();
    loop {
        let Some((e, c)) = cur
            .terms()
            .find(|(e, _)| e.0[k] as usize >= k)
            .map(|(e, c)| (e.clone(), c.clone()))
        else {
            return cur;
        };
        let mut base = e.clone();
        base.0[k] -= k as u32;
        let mono = Poly::monomial(aux, e, c.clone());
        cur = &(&cur - &mono) + &rel.mul_monomial(&base, &c);
    }
}

/// `∇_p = Σ_j x_j^p/P'_σ(x_j) ∂_{x_j}` in `σ`-coordinates: `(−1)^{k−p−1} ∂_{k−p}`.
pub fn nabla_p_as_partial(k: usize, p: usize) -> Result<WeylOp> {
    if p >= k {
        return Err(Error::OutOfRange(format!("∇_{p} with k = {k}")));
    }
    let d = WeylOp::d(VarSpace::Sigma(k), k - p);
    Ok(if (k - p - 1).is_multiple_of(2) { d } else { -d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::sigma;
    use crate::space::Weight;
    use crate::weyl::{ds, ms};

    #[test]
    fn theta_values() {
        assert_eq!(theta(3, 1).unwrap(), Poly::one(VarSpace::Aux(3)));
        assert_eq!(theta(3, 2).unwrap().to_string(), "s1 - t");
        let th3 = theta(3, 3).unwrap();
        assert_eq!(th3.to_string(), "-s1*t + t^2 + s2");
        assert!(theta(3, 4).is_err());
    }

    #[test]
    fn jacobian_values() {
        assert_eq!(jacobian_entry(3, 1, 2).unwrap(), Poly::one(VarSpace::X(3)));
        assert_eq!(jacobian_entry(2, 2, 1).unwrap(), x(2, 2));
        assert_eq!(jacobian_entry(3, 2, 1).unwrap(), &x(3, 2) + &x(3, 3));
        for h in 1..=3 {
            for j in 1..=3 {
                let direct = elementary_symmetric(3, h).unwrap().partial_at(j - 1);
                assert_eq!(jacobian_entry(3, h, j).unwrap(), direct);
            }
        }
    }

    #[test]
    fn symmetric_ops() {
        let s2 = elementary_symmetric_op(2, 2).unwrap();
        assert_eq!(s2.op().to_string(), "dx1*dx2");
        assert_eq!(elementary_symmetric_op(3, 2).unwrap().op().len(), 3);
        let d1 = WeylOp::d(VarSpace::X(2), 1);
        assert_eq!(
            SymmetricOperator::new(d1.clone()).unwrap_err(),
            Error::NotSymmetricOperator(1, 2)
        );
        assert_eq!(symmetrize_operator(&d1).unwrap().into_inner().len(), 2);
    }

    #[test]
    fn xi_of_s2_k2() {
        let xi = xi_transport(&elementary_symmetric_op(2, 2).unwrap()).unwrap();
        let s1 = ms(2, 1);
        let s2 = ms(2, 2);
        let (d1, d2) = (ds(2, 1), ds(2, 2));
        let expect = &(&(&(&d1 * &d1) + &(&(&s1 * &d1) * &d2)) + &(&(&s2 * &d2) * &d2)) + &d2;
        assert_eq!(xi, expect);
    }

    #[test]
    fn xi_of_s1_is_nabla() {
        for k in 1..=4 {
            let xi = xi_transport(&elementary_symmetric_op(k, 1).unwrap()).unwrap();
            let mut nabla = WeylOp::zero(VarSpace::Sigma(k));
            for h in 0..k {
                let coef = crate::symfun::sigma0(k, h).scale(&Rational::from_int((k - h) as i64));
                nabla.add_term(Exp::unit(k, h), coef);
            }
            assert_eq!(xi, nabla, "k = {k}");
        }
    }

    #[test]
    fn xi_of_multiplication() {
        let e2 = elementary_symmetric(3, 2).unwrap();
        let p = SymmetricOperator::new(WeylOp::from_poly(e2)).unwrap();
        assert_eq!(xi_transport(&p).unwrap(), ms(3, 2));
    }

    #[test]
    fn derivations() {
        let u0 = SymmetricOperator::new(u_op(3, 0)).unwrap();
        assert_eq!(
            decompose_derivation(&u0).unwrap(),
            vec![(0, Poly::one(VarSpace::Sigma(3)))]
        );
        let d = SymmetricOperator::new(u_op(2, 2)).unwrap();
        assert_eq!(
            decompose_derivation(&d).unwrap(),
            vec![(0, -sigma(2, 2)), (1, sigma(2, 1))]
        );
        let d = SymmetricOperator::new(&u_op(3, 1) + &u_op(3, 2)).unwrap();
        let one = Poly::one(VarSpace::Sigma(3));
        assert_eq!(decompose_derivation(&d).unwrap(), vec![(1, one.clone()), (2, one)]);
        let s2 = elementary_symmetric_op(2, 2).unwrap();
        assert!(matches!(decompose_derivation(&s2), Err(Error::NotDerivation(_))));
    }

    #[test]
    fn derivation_with_symmetric_coefficients() {
        // (x1 + x2 + x3)·U_1 + U_3 at k = 3
        let e1 = elementary_symmetric(3, 1).unwrap();
        let op = &u_op(3, 1).left_mul_poly(&e1).unwrap() + &u_op(3, 3);
        let parts = decompose_derivation(&SymmetricOperator::new(op).unwrap()).unwrap();
        assert!(parts.iter().all(|(p, _)| *p < 3));
    }

    #[test]
    fn nabla_p() {
        assert_eq!(nabla_p_as_partial(2, 1).unwrap(), ds(2, 1));
        assert_eq!(nabla_p_as_partial(2, 0).unwrap(), -ds(2, 2));
        for p in 0..4 {
            assert_eq!(nabla_p_as_partial(4, p).unwrap().weight(), Weight::Pure(p as i64 - 4));
        }
        assert!(nabla_p_as_partial(2, 2).is_err());
    }

    #[test]
    fn symbol_transport_s2() {
        let s2 = elementary_symmetric_op(3, 2).unwrap();
        let xi = xi_transport(&s2).unwrap();
        let pushed = cotangent_transport(&s2.op().symbol().unwrap()).unwrap();
        assert_eq!(pushed, xi.symbol().unwrap());
    }
}

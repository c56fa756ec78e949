//! Differential operators with polynomial coefficients in normal form.
//!
//! A [`WeylOp`] is stored as `Σ_β a_β ∂^β` with every coefficient to the left
//! of every derivative. Products are normal-ordered eagerly with the Leibniz
//! rule, so two operators are equal exactly when their term maps are equal.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::poly::{write_monomial, Exp, Poly};
use crate::rational::Rational;
use crate::space::{VarSpace, Weight};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeylOp {
    space: VarSpace,
    terms: BTreeMap<Exp, Poly>,
}

impl WeylOp {
    pub fn zero(space: VarSpace) -> Self {
        assert!(space.is_coordinate_space(), "{space} is not a coordinate space");
        WeylOp {
            space,
            terms: BTreeMap::new(),
        }
    }

    /// Multiplication by a polynomial.
    pub fn from_poly(p: Poly) -> Self {
        let space = p.space();
        let mut op = WeylOp::zero(space);
        op.add_term(Exp::zero(space.k()), p);
        op
    }

    pub fn scalar(space: VarSpace, c: Rational) -> Self {
        WeylOp::from_poly(Poly::constant(space, c))
    }

    pub fn identity(space: VarSpace) -> Self {
        WeylOp::scalar(space, Rational::one())
    }

    /// `∂_i` for the 1-based coordinate `i`.
    pub fn d(space: VarSpace, i: usize) -> Self {
        assert!((1..=space.k()).contains(&i), "∂ index {i} out of range for {space}");
        WeylOp::monomial(Poly::one(space), Exp::unit(space.k(), i - 1))
    }

    /// `a·∂^β`.
    pub fn monomial(coeff: Poly, beta: Exp) -> Self {
        let space = coeff.space();
        assert_eq!(beta.len(), space.k());
        let mut op = WeylOp::zero(space);
        op.add_term(beta, coeff);
        op
    }

    pub fn from_terms(space: VarSpace, terms: impl IntoIterator<Item = (Exp, Poly)>) -> Result<Self> {
        let mut op = WeylOp::zero(space);
        for (b, p) in terms {
            if p.space() != space {
                return Err(Error::SpaceMismatch(p.space(), space));
            }
            if b.len() != space.k() {
                return Err(Error::OutOfRange(format!(
                    "∂-exponent of length {} in {space}",
                    b.len()
                )));
            }
            op.add_term(b, p);
        }
        Ok(op)
    }

    pub fn space(&self) -> VarSpace {
        self.space
    }

    pub fn k(&self) -> usize {
        self.space.k()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `max |β|` over nonzero terms; zero for the zero operator.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(Exp::degree).max().unwrap_or(0)
    }

    /// Terms in canonical (descending graded-lex on `β`) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Poly)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, beta: &Exp) -> Poly {
        self.terms.get(beta).cloned().unwrap_or_else(|| Poly::zero(self.space))
    }

    pub fn add_term(&mut self, beta: Exp, p: Poly) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(beta) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &p;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_space(&self, other: &WeylOp) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch(self.space, other.space));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &WeylOp) -> Result<WeylOp> {
        self.check_space(other)?;
        let mut out = self.clone();
        for (b, p) in &other.terms {
            out.add_term(b.clone(), p.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &WeylOp) -> Result<WeylOp> {
        self.check_space(other)?;
        let mut out = self.clone();
        for (b, p) in &other.terms {
            out.add_term(b.clone(), -p);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> WeylOp {
        let mut out = WeylOp::zero(self.space);
        for (b, p) in &self.terms {
            out.add_term(b.clone(), p.scale(c));
        }
        out
    }

    /// `p·self`, multiplying every coefficient on the left.
    pub fn left_mul_poly(&self, p: &Poly) -> Result<WeylOp> {
        if p.space() != self.space {
            return Err(Error::SpaceMismatch(p.space(), self.space));
        }
        let mut out = WeylOp::zero(self.space);
        for (b, a) in &self.terms {
            out.add_term(b.clone(), p * a);
        }
        Ok(out)
    }

    /// Normal-ordered product `self ∘ other`, using
    /// `∂^α ∘ b = Σ_{γ≤α} C(α,γ) ∂^γ(b) ∂^{α−γ}`.
    pub fn checked_mul(&self, other: &WeylOp) -> Result<WeylOp> {
        self.check_space(other)?;
        let mut out = WeylOp::zero(self.space);
        for (alpha, a) in &self.terms {
            let gammas = alpha.divisors();
            for (beta, b) in &other.terms {
                for gamma in &gammas {
                    let db = b.partial_multi(gamma);
                    if db.is_zero() {
                        continue;
                    }
                    let binom: Rational = alpha
                        .0
                        .iter()
                        .zip(&gamma.0)
                        .map(|(&n, &r)| Rational::binomial(n, r))
                        .product();
                    let rest = alpha.checked_sub(gamma).expect("γ ≤ α");
                    out.add_term(rest.add(beta), (a * &db).scale(&binom));
                }
            }
        }
        Ok(out)
    }

    /// `[self, other] = self∘other − other∘self`.
    pub fn commutator(&self, other: &WeylOp) -> Result<WeylOp> {
        self.checked_mul(other)?.checked_sub(&other.checked_mul(self)?)
    }

    /// Action on a polynomial of the same coordinate space.
    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        if f.space() != self.space {
            return Err(Error::SpaceMismatch(f.space(), self.space));
        }
        let mut out = Poly::zero(self.space);
        for (beta, a) in &self.terms {
            let df = f.partial_multi(beta);
            if !df.is_zero() {
                out = &out + &(a * &df);
            }
        }
        Ok(out)
    }

    /// Principal symbol in the cotangent space: top-order part with
    /// `∂_h ↦ η_h` (σ-space) or `∂_{x_i} ↦ ξ_i` (x-space).
    pub fn symbol(&self) -> Result<Poly> {
        if self.is_zero() {
            return Err(Error::ZeroOperator);
        }
        Ok(self.graded_part(self.order()))
    }

    /// Degree-`d` part in the derivatives, as a cotangent polynomial.
    pub fn graded_part(&self, d: u32) -> Poly {
        let k = self.k();
        let cot = self.space.cotangent().expect("coordinate space");
        let positions: Vec<usize> = (0..k).collect();
        let mut out = Poly::zero(cot);
        for (beta, a) in self.terms.iter().filter(|(b, _)| b.degree() == d) {
            let mut e = vec![0; k];
            e.extend_from_slice(&beta.0);
            out = &out + &a.relabel(cot, &positions).mul_monomial(&Exp(e), &Rational::one());
        }
        out
    }

    /// Inverse of [`Self::graded_part`]: a cotangent polynomial read as an
    /// operator with coefficients on the left.
    pub fn from_symbol(sym: &Poly) -> Result<WeylOp> {
        let (space, k) = match sym.space() {
            VarSpace::Mixed(k) => (VarSpace::Sigma(k), k),
            VarSpace::XiMixed(k) => (VarSpace::X(k), k),
            other => return Err(Error::OutOfRange(format!("{other} is not a cotangent space"))),
        };
        let mask: Vec<bool> = (0..2 * k).map(|p| p >= k).collect();
        let base: Vec<usize> = (0..k).chain(0..k).collect();
        let mut op = WeylOp::zero(space);
        for (mono, coeff) in sym.split_by(&mask) {
            let beta = Exp(mono.0[k..].to_vec());
            // coefficient only uses the base positions; fold η positions away
            op.add_term(beta, coeff.relabel(space, &base));
        }
        Ok(op)
    }

    /// Weight: `σ_h ↦ h`, `x ↦ 1`, `∂_{σ_h} ↦ −h`, `∂_x ↦ −1`.
    pub fn weight(&self) -> Weight {
        let w = self.space.weights();
        let mut seen: Option<i64> = None;
        for (beta, a) in &self.terms {
            let dw = -beta.weighted_degree(&w);
            match a.weight() {
                Weight::NonPure => return Weight::NonPure,
                Weight::Pure(cw) => {
                    let tw = cw + dw;
                    match seen {
                        None => seen = Some(tw),
                        Some(s) if s != tw => return Weight::NonPure,
                        _ => {}
                    }
                }
            }
        }
        Weight::Pure(seen.unwrap_or(0))
    }

    /// Apply the transposition of coordinates `a`, `b` (0-based) to both the
    /// coefficients and the derivatives.
    pub fn swap_coords(&self, a: usize, b: usize) -> WeylOp {
        let mut out = WeylOp::zero(self.space);
        for (beta, p) in &self.terms {
            let mut nb = beta.clone();
            nb.0.swap(a, b);
            out.add_term(nb, p.swap_vars(a, b));
        }
        out
    }

    /// Top-order coefficient count, handy for reports.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for WeylOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let dname = |i: usize| match self.space {
            VarSpace::X(_) => format!("dx{i}"),
            _ => format!("d{i}"),
        };
        for (n, (beta, a)) in self.terms().enumerate() {
            let mut d = String::new();
            for (i, &p) in beta.0.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                if !d.is_empty() {
                    d.push('*');
                }
                d.push_str(&dname(i + 1));
                if p > 1 {
                    d.push_str(&format!("^{p}"));
                }
            }
            if a.len() == 1 {
                let (e, c) = a.terms().next().unwrap();
                let mut mono = String::new();
                write_monomial(&mut mono, self.space, e, "*")?;
                if !d.is_empty() {
                    if !mono.is_empty() {
                        mono.push('*');
                    }
                    mono.push_str(&d);
                }
                crate::poly::write_signed(f, c, &mono, n == 0)?;
            } else {
                if n > 0 {
                    f.write_str(" + ")?;
                }
                write!(f, "({a})")?;
                if !d.is_empty() {
                    write!(f, "*{d}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for WeylOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylOp[{}]({})", self.space, self)
    }
}

impl Add for &WeylOp {
    type Output = WeylOp;
    fn add(self, rhs: &WeylOp) -> WeylOp {
        self.checked_add(rhs).expect("WeylOp + WeylOp")
    }
}

impl Sub for &WeylOp {
    type Output = WeylOp;
    fn sub(self, rhs: &WeylOp) -> WeylOp {
        self.checked_sub(rhs).expect("WeylOp - WeylOp")
    }
}

impl Mul for &WeylOp {
    type Output = WeylOp;
    fn mul(self, rhs: &WeylOp) -> WeylOp {
        self.checked_mul(rhs).expect("WeylOp * WeylOp")
    }
}

impl Add for WeylOp {
    type Output = WeylOp;
    fn add(self, rhs: WeylOp) -> WeylOp {
        &self + &rhs
    }
}

impl Sub for WeylOp {
    type Output = WeylOp;
    fn sub(self, rhs: WeylOp) -> WeylOp {
        &self - &rhs
    }
}

impl Mul for WeylOp {
    type Output = WeylOp;
    fn mul(self, rhs: WeylOp) -> WeylOp {
        &self * &rhs
    }
}

impl Neg for &WeylOp {
    type Output = WeylOp;
    fn neg(self) -> WeylOp {
        self.scale(&Rational::from_int(-1))
    }
}

impl Neg for WeylOp {
    type Output = WeylOp;
    fn neg(self) -> WeylOp {
        -&self
    }
}

/// `∂_{σ_i}` in `Sigma(k)`.
pub fn ds(k: usize, i: usize) -> WeylOp {
    WeylOp::d(VarSpace::Sigma(k), i)
}

/// Multiplication by `σ_h` in `Sigma(k)`.
pub fn ms(k: usize, h: usize) -> WeylOp {
    WeylOp::from_poly(crate::poly::sigma(k, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::sigma;

    #[test]
    fn canonical_commutation() {
        let k = 2;
        let lhs = &ds(k, 1) * &ms(k, 1);
        let expect = &(&ms(k, 1) * &ds(k, 1)) + &WeylOp::identity(VarSpace::Sigma(k));
        assert_eq!(lhs, expect);
        assert_eq!(
            ds(k, 1).commutator(&ms(k, 1)).unwrap(),
            WeylOp::identity(VarSpace::Sigma(k))
        );
    }

    #[test]
    fn euler_square() {
        // (σ2∂2)(σ2∂2) = σ2²∂2² + σ2∂2
        let k = 2;
        let e = &ms(k, 2) * &ds(k, 2);
        let sq = &e * &e;
        let expect = &WeylOp::monomial(sigma(k, 2).pow(2), Exp(vec![0, 2])) + &e;
        assert_eq!(sq, expect);
    }

    #[test]
    fn apply_and_symbol() {
        let k = 2;
        assert!(ds(k, 2).apply(&sigma(k, 1).pow(3)).unwrap().is_zero());
        let op = &WeylOp::monomial(sigma(k, 1), Exp(vec![0, 2])) + &ds(k, 1);
        let sym = op.symbol().unwrap();
        assert_eq!(sym.to_string(), "s1*e2^2");
        assert!(WeylOp::zero(VarSpace::Sigma(2)).symbol().is_err());
        assert_eq!(
            WeylOp::from_symbol(&sym).unwrap(),
            WeylOp::monomial(sigma(k, 1), Exp(vec![0, 2]))
        );
    }

    #[test]
    fn mismatch_rejected() {
        assert!(ds(2, 1).checked_mul(&ds(3, 1)).is_err());
        assert!(ds(2, 1).apply(&sigma(3, 1)).is_err());
    }

    #[test]
    fn weights() {
        assert_eq!(ds(3, 2).weight(), Weight::Pure(-2));
        assert_eq!((&ms(3, 1) * &ds(3, 2)).weight(), Weight::Pure(-1));
        assert_eq!((&ds(3, 1) + &ds(3, 2)).weight(), Weight::NonPure);
    }

    #[test]
    fn display() {
        let op = &(&WeylOp::monomial(&sigma(2, 1) + &sigma(2, 2), Exp(vec![1, 1])) + &ds(2, 2)) - &ms(2, 1);
        assert_eq!(op.to_string(), "(s1 + s2)*d1*d2 + d2 - s1");
    }
}

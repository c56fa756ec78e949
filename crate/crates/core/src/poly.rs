//! Sparse multivariate polynomials over the rationals.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::space::{Var, VarSpace, Weight};

/// Exponent vector. Ordered graded-lexicographically: total degree first,
/// then lexicographically with the first variable most significant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Exp(pub Vec<u32>);

impl Exp {
    pub fn zero(n: usize) -> Self {
        Exp(vec![0; n])
    }

    pub fn unit(n: usize, pos: usize) -> Self {
        let mut e = vec![0; n];
        e[pos] = 1;
        Exp(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &Exp) -> Exp {
        Exp(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, if `other ≤ self` componentwise.
    pub fn checked_sub(&self, other: &Exp) -> Option<Exp> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Exp)
    }

    pub fn divides(&self, other: &Exp) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn weighted_degree(&self, weights: &[i64]) -> i64 {
        self.0.iter().zip(weights).map(|(e, w)| *e as i64 * w).sum()
    }

    /// `α!`
    pub fn factorial(&self) -> Rational {
        self.0.iter().map(|e| Rational::factorial(*e)).product()
    }

    /// All `γ ≤ self` componentwise.
    pub fn divisors(&self) -> Vec<Exp> {
        let mut out = vec![Vec::with_capacity(self.len())];
        for &e in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=e).map(move |g| {
                        let mut p = prefix.clone();
                        p.push(g);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(Exp).collect()
    }
}

impl Ord for Exp {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial with exact rational coefficients over a [`VarSpace`].
///
/// No zero coefficients are stored, so structural equality is polynomial
/// equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    space: VarSpace,
    terms: BTreeMap<Exp, Rational>,
}

impl Poly {
    pub fn zero(space: VarSpace) -> Self {
        Poly {
            space,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(space: VarSpace, c: Rational) -> Self {
        let mut p = Poly::zero(space);
        p.add_term(Exp::zero(space.nvars()), c);
        p
    }

    pub fn one(space: VarSpace) -> Self {
        Poly::constant(space, Rational::one())
    }

    pub fn int(space: VarSpace, n: i64) -> Self {
        Poly::constant(space, Rational::from_int(n))
    }

    pub fn var(space: VarSpace, v: Var) -> Result<Self> {
        let pos = space.position(v)?;
        Ok(Poly::monomial(space, Exp::unit(space.nvars(), pos), Rational::one()))
    }

    /// Variable at a flat position; panics when out of range.
    pub fn var_at(space: VarSpace, pos: usize) -> Self {
        Poly::monomial(space, Exp::unit(space.nvars(), pos), Rational::one())
    }

    pub fn monomial(space: VarSpace, exp: Exp, c: Rational) -> Self {
        assert_eq!(exp.len(), space.nvars(), "exponent length does not match {space}");
        let mut p = Poly::zero(space);
        p.add_term(exp, c);
        p
    }

    pub fn from_terms(space: VarSpace, terms: impl IntoIterator<Item = (Exp, Rational)>) -> Self {
        let mut p = Poly::zero(space);
        for (e, c) in terms {
            assert_eq!(e.len(), space.nvars(), "exponent length does not match {space}");
            p.add_term(e, c);
        }
        p
    }

    pub fn space(&self) -> VarSpace {
        self.space
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.degree() == 0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (descending graded-lex) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, e: &Exp) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Exp::zero(self.space.nvars()))
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(&Exp, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Exp::degree).max()
    }

    pub fn add_term(&mut self, e: Exp, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_space(&self, other: &Poly) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch(self.space, other.space));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_space(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_space(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_space(other)?;
        let mut out = Poly::zero(self.space);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.add(eb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.space);
        }
        Poly {
            space: self.space,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, e: &Exp, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.space);
        }
        Poly {
            space: self.space,
            terms: self.terms.iter().map(|(f, v)| (f.add(e), v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one(self.space);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to a named variable.
    pub fn partial(&self, v: Var) -> Result<Poly> {
        Ok(self.partial_at(self.space.position(v)?))
    }

    /// Partial derivative with respect to the variable at a flat position.
    pub fn partial_at(&self, pos: usize) -> Poly {
        let mut out = Poly::zero(self.space);
        for (e, c) in &self.terms {
            let d = e.0[pos];
            if d == 0 {
                continue;
            }
            let mut f = e.clone();
            f.0[pos] -= 1;
            out.add_term(f, c * &Rational::from_int(d as i64));
        }
        out
    }

    /// Mixed partial `∂^β` over the first `β.len()` positions.
    pub fn partial_multi(&self, beta: &Exp) -> Poly {
        let mut out = Poly::zero(self.space);
        for (e, c) in &self.terms {
            let Some(rest) = e.checked_sub(&pad(beta, e.len())) else {
                continue;
            };
            let mut coef = c.clone();
            for (i, &b) in beta.0.iter().enumerate() {
                for j in 0..b {
                    coef *= &Rational::from_int((e.0[i] - j) as i64);
                }
            }
            out.add_term(rest, coef);
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.space.nvars());
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &p) in point.iter().zip(&e.0) {
                if p > 0 {
                    t *= &x.pow(p);
                }
            }
            acc += &t;
        }
        acc
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.space.nvars());
        self.terms
            .iter()
            .map(|(e, c)| {
                point
                    .iter()
                    .zip(&e.0)
                    .fold(Complex64::new(c.to_f64(), 0.0), |acc, (x, &p)| acc * x.powu(p))
            })
            .sum()
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.space.nvars());
        self.terms
            .iter()
            .map(|(e, c)| {
                point
                    .iter()
                    .zip(&e.0)
                    .fold(c.to_f64(), |acc, (x, &p)| acc * x.powi(p as i32))
            })
            .sum()
    }

    /// Substitute `images[i]` for the `i`-th variable. All images share one
    /// target space.
    pub fn compose(&self, images: &[Poly], target: VarSpace) -> Result<Poly> {
        if images.len() != self.space.nvars() {
            return Err(Error::OutOfRange(format!(
                "compose: {} images for {} variables",
                images.len(),
                self.space.nvars()
            )));
        }
        if let Some(bad) = images.iter().find(|p| p.space != target) {
            return Err(Error::SpaceMismatch(bad.space, target));
        }
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(target), p.clone()]).collect();
        let mut out = Poly::zero(target);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &p) in e.0.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                while powers[i].len() <= p as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][p as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Rename variables into another space: source position `i` goes to
    /// `positions[i]` in `target`.
    pub fn relabel(&self, target: VarSpace, positions: &[usize]) -> Poly {
        assert_eq!(positions.len(), self.space.nvars());
        let n = target.nvars();
        let mut out = Poly::zero(target);
        for (e, c) in &self.terms {
            let mut f = vec![0; n];
            for (i, &p) in e.0.iter().enumerate() {
                f[positions[i]] += p;
            }
            out.add_term(Exp(f), c.clone());
        }
        out
    }

    /// Embed a σ-space polynomial into a space whose first `k` variables are σ.
    pub fn embed_sigma(&self, target: VarSpace) -> Poly {
        let positions: Vec<usize> = (0..self.space.nvars()).collect();
        self.relabel(target, &positions)
    }

    /// Split by the exponents on the positions selected in `mask`: returns
    /// `(monomial in the selected variables, coefficient in the others)`.
    pub fn split_by(&self, mask: &[bool]) -> BTreeMap<Exp, Poly> {
        let mut out: BTreeMap<Exp, Poly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let sel = Exp(e.0.iter().zip(mask).map(|(x, &m)| if m { *x } else { 0 }).collect());
            let rest = Exp(e.0.iter().zip(mask).map(|(x, &m)| if m { 0 } else { *x }).collect());
            out.entry(sel)
                .or_insert_with(|| Poly::zero(self.space))
                .add_term(rest, c.clone());
        }
        out
    }

    /// Group terms by their total degree in the selected positions.
    pub fn homogeneous_parts(&self, mask: &[bool]) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let d = e.0.iter().zip(mask).filter(|(_, &m)| m).map(|(x, _)| *x).sum();
            out.entry(d)
                .or_insert_with(|| Poly::zero(self.space))
                .add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn weight(&self) -> Weight {
        let w = self.space.weights();
        let mut it = self.terms.keys().map(|e| e.weighted_degree(&w));
        match it.next() {
            None => Weight::Pure(0),
            Some(first) => {
                if it.all(|x| x == first) {
                    Weight::Pure(first)
                } else {
                    Weight::NonPure
                }
            }
        }
    }

    pub fn uses_only(&self, mask: &[bool]) -> bool {
        self.terms
            .keys()
            .all(|e| e.0.iter().zip(mask).all(|(x, &m)| m || *x == 0))
    }

    /// Highest power of the variable at `pos`.
    pub fn degree_in(&self, pos: usize) -> u32 {
        self.terms.keys().map(|e| e.0[pos]).max().unwrap_or(0)
    }

    /// Swap two variables.
    pub fn swap_vars(&self, a: usize, b: usize) -> Poly {
        let mut out = Poly::zero(self.space);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            f.0.swap(a, b);
            out.add_term(f, c.clone());
        }
        out
    }
}

fn pad(beta: &Exp, n: usize) -> Exp {
    let mut v = beta.0.clone();
    v.resize(n, 0);
    Exp(v)
}

pub(crate) fn write_monomial(f: &mut impl fmt::Write, space: VarSpace, e: &Exp, sep: &str) -> fmt::Result {
    let mut first = true;
    for (pos, &p) in e.0.iter().enumerate() {
        if p == 0 {
            continue;
        }
        if !first {
            f.write_str(sep)?;
        }
        first = false;
        write!(f, "{}", space.var(pos))?;
        if p > 1 {
            write!(f, "^{p}")?;
        }
    }
    Ok(())
}

/// Writes `c·m` as one signed summand; `first` suppresses the leading `+`.
pub(crate) fn write_signed(f: &mut impl fmt::Write, c: &Rational, mono: &str, first: bool) -> fmt::Result {
    let neg = c.is_negative();
    let a = c.abs();
    match (first, neg) {
        (true, true) => f.write_str("-")?,
        (true, false) => {}
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
    }
    if mono.is_empty() {
        write!(f, "{a}")
    } else if a.is_one() {
        f.write_str(mono)
    } else {
        write!(f, "{a}*{mono}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let mut m = String::new();
            write_monomial(&mut m, self.space, e, "*")?;
            write_signed(f, c, &m, i == 0)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.space, self)
    }
}

// Operator forms panic on a space mismatch; the `checked_*` methods report it.
impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("Poly + Poly")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("Poly - Poly")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("Poly * Poly")
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&Rational::from_int(-1))
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// Shorthand for the variable `σ_h` in `Sigma(k)`.
pub fn sigma(k: usize, h: usize) -> Poly {
    Poly::var(VarSpace::Sigma(k), Var::sigma(h)).expect("σ index in range")
}

/// Shorthand for the variable `x_j` in `X(k)`.
pub fn x(k: usize, j: usize) -> Poly {
    Poly::var(VarSpace::X(k), Var::x(j)).expect("x index in range")
}

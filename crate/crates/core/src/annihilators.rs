//! The second-order annihilator system of trace functions and its companions.
//!
//! All operators live in `Sigma(k)`. `∂_h` below is `∂/∂σ_h`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::poly::Poly;
use crate::rational::Rational;
use crate::space::VarSpace;
use crate::symfun::{sigma0, NewtonFamily};
use crate::weyl::{ds, ms, WeylOp};

fn check_index(k: usize, i: i64, what: &str) -> Result<usize> {
    if i < 1 || i > k as i64 {
        return Err(Error::OutOfRange(format!("{what} index {i} outside [1, {k}]")));
    }
    Ok(i as usize)
}

/// `A(p,q,i) = ∂_p∂_q − ∂_{p+i}∂_{q−i}`.
pub fn op_a(k: usize, p: i64, q: i64, i: i64) -> Result<WeylOp> {
    let (p1, q1) = (check_index(k, p, "A")?, check_index(k, q, "A")?);
    let (p2, q2) = (check_index(k, p + i, "A")?, check_index(k, q - i, "A")?);
    Ok(&(&ds(k, p1) * &ds(k, q1)) - &(&ds(k, p2) * &ds(k, q2)))
}

/// `Σ_h σ_h ∂_h`.
pub fn euler(k: usize) -> WeylOp {
    (1..=k).fold(WeylOp::zero(VarSpace::Sigma(k)), |acc, h| {
        &acc + &(&ms(k, h) * &ds(k, h))
    })
}

/// `T^m = ∂_1∂_{m−1} + (Σ_h σ_h∂_h)∂_m + ∂_m`, `m ∈ [2, k]`.
pub fn op_t(k: usize, m: usize) -> Result<WeylOp> {
    if m < 2 || m > k {
        return Err(Error::OutOfRange(format!("T^{m} needs m ∈ [2, {k}]")));
    }
    let dm = ds(k, m);
    Ok(&(&(&ds(k, 1) * &ds(k, m - 1)) + &(&euler(k) * &dm)) + &dm)
}

/// `T_0^μ = Σ_{h<k} σ_h∂_{k−μ−1}∂_{h+1} + σ_k∂_{k−μ}∂_k + ∂_{k−μ}`, `μ ∈ [0, k−2]`.
pub fn op_t0(k: usize, mu: usize) -> Result<WeylOp> {
    if k < 2 || mu > k - 2 {
        return Err(Error::OutOfRange(format!("T_0^{mu} needs μ ∈ [0, k−2] with k = {k}")));
    }
    let space = VarSpace::Sigma(k);
    let mut op = WeylOp::zero(space);
    let a = k - mu - 1;
    for h in 0..k {
        op = &op + &(&WeylOp::from_poly(sigma0(k, h)) * &(&ds(k, a) * &ds(k, h + 1)));
    }
    op = &op + &(&(&ms(k, k) * &ds(k, a + 1)) * &ds(k, k));
    Ok(&op + &ds(k, a + 1))
}

/// `U_0 = Σ_h h σ_h ∂_h`.
pub fn op_u0(k: usize) -> WeylOp {
    (1..=k).fold(WeylOp::zero(VarSpace::Sigma(k)), |acc, h| {
        &acc + &(&ms(k, h) * &ds(k, h)).scale(&Rational::from_int(h as i64))
    })
}

/// `∇ = Σ_{h<k} (k−h) σ_h ∂_{h+1}`.
pub fn op_nabla(k: usize) -> WeylOp {
    (0..k).fold(WeylOp::zero(VarSpace::Sigma(k)), |acc, h| {
        &acc + &(&WeylOp::from_poly(sigma0(k, h)) * &ds(k, h + 1)).scale(&Rational::from_int((k - h) as i64))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `T^m + ∂_m`, annihilating the trace forms.
    Forms,
    /// `T^m − ∂_m`, annihilating the primitive Newton polynomials.
    Primitive,
}

pub fn op_variant(k: usize, m: usize, which: Variant) -> Result<WeylOp> {
    let t = op_t(k, m)?;
    Ok(match which {
        Variant::Forms => &t + &ds(k, m),
        Variant::Primitive => &t - &ds(k, m),
    })
}

/// Identifier of a named generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenId {
    /// `A(p,q,1)`
    A(usize, usize),
    /// `T^m`
    T(usize),
    /// `T^m + ∂_m`
    TForms(usize),
    /// `T^m − ∂_m`
    TPrimitive(usize),
}

impl GenId {
    pub fn op(&self, k: usize) -> Result<WeylOp> {
        match *self {
            GenId::A(p, q) => op_a(k, p as i64, q as i64, 1),
            GenId::T(m) => op_t(k, m),
            GenId::TForms(m) => op_variant(k, m, Variant::Forms),
            GenId::TPrimitive(m) => op_variant(k, m, Variant::Primitive),
        }
    }
}

impl fmt::Display for GenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenId::A(p, q) => write!(f, "A({p},{q},1)"),
            GenId::T(m) => write!(f, "T({m})"),
            GenId::TForms(m) => write!(f, "T+({m})"),
            GenId::TPrimitive(m) => write!(f, "T-({m})"),
        }
    }
}

impl FromStr for GenId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad generator id {s:?}"));
        let (head, rest) = s.split_once('(').ok_or_else(bad)?;
        let args: Vec<usize> = rest
            .strip_suffix(')')
            .ok_or_else(bad)?
            .split(',')
            .map(|a| a.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match (head, args.as_slice()) {
            ("A", [p, q, 1]) => Ok(GenId::A(*p, *q)),
            ("T", [m]) => Ok(GenId::T(*m)),
            ("T+", [m]) => Ok(GenId::TForms(*m)),
            ("T-", [m]) => Ok(GenId::TPrimitive(*m)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for GenId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GenId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A named list of generators over `Sigma(k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    pub k: usize,
    pub gens: Vec<(GenId, WeylOp)>,
}

impl GeneratorSet {
    fn build(k: usize, ids: Vec<GenId>) -> Result<Self> {
        let gens = ids
            .into_iter()
            .map(|id| id.op(k).map(|op| (id, op)))
            .collect::<Result<_>>()?;
        Ok(GeneratorSet { k, gens })
    }

    /// Indices `(p, q)` of the nonzero `A(p,q,1)` up to sign: `p + 1 < q`.
    pub fn a_indices(k: usize) -> Vec<(usize, usize)> {
        (1..=k).flat_map(|p| (p + 2..=k).map(move |q| (p, q))).collect()
    }

    /// Every legal nonzero `A(p,q,1)`, both signs included.
    pub fn all_a_indices(k: usize) -> Vec<(usize, usize)> {
        (1..k)
            .flat_map(|p| (2..=k).map(move |q| (p, q)))
            .filter(|&(p, q)| p + 1 != q)
            .collect()
    }

    /// The system: `A(p,q,1)` with `p + 1 < q` and `T^m`, `m ∈ [2, k]`;
    /// one generator per minor.
    pub fn system(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::OutOfRange(format!("the system needs k ≥ 2, got {k}")));
        }
        let mut ids: Vec<GenId> = Self::a_indices(k).into_iter().map(|(p, q)| GenId::A(p, q)).collect();
        ids.extend((2..=k).map(GenId::T));
        Self::build(k, ids)
    }

    /// Like [`Self::system`] but with every legal nonzero `A(p,q,1)`.
    pub fn system_full(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::OutOfRange(format!("the system needs k ≥ 2, got {k}")));
        }
        let mut ids: Vec<GenId> = Self::all_a_indices(k)
            .into_iter()
            .map(|(p, q)| GenId::A(p, q))
            .collect();
        ids.extend((2..=k).map(GenId::T));
        Self::build(k, ids)
    }

    /// `A`-generators together with a variant of `T^m`.
    pub fn with_variant(k: usize, which: Variant) -> Result<Self> {
        if k < 2 {
            return Err(Error::OutOfRange(format!("the system needs k ≥ 2, got {k}")));
        }
        let mut ids: Vec<GenId> = Self::all_a_indices(k)
            .into_iter()
            .map(|(p, q)| GenId::A(p, q))
            .collect();
        ids.extend((2..=k).map(|m| match which {
            Variant::Forms => GenId::TForms(m),
            Variant::Primitive => GenId::TPrimitive(m),
        }));
        Self::build(k, ids)
    }

    pub fn get(&self, id: &GenId) -> Option<&WeylOp> {
        self.gens.iter().find(|(g, _)| g == id).map(|(_, op)| op)
    }
}

/// Test family for annihilation reports.
#[derive(Clone, Debug)]
pub enum Family {
    Newton,
    DNewton,
    PNewton,
    /// Explicit list; member `i` is reported with index `i`.
    Custom(Vec<Poly>),
}

impl Family {
    /// `(index, polynomial)` pairs up to `max_m`.
    pub fn members(&self, k: usize, max_m: usize) -> Result<Vec<(i64, Poly)>> {
        let fam = NewtonFamily::new(k);
        Ok(match self {
            Family::Newton => (0..=max_m).map(|m| (m as i64, fam.newton(m))).collect(),
            Family::DNewton => {
                let lo = -(k as i64) + 1;
                (lo..=max_m as i64)
                    .map(|m| fam.dnewton(m).map(|p| (m, p)))
                    .collect::<Result<_>>()?
            }
            Family::PNewton => (1..=max_m)
                .map(|m| fam.pnewton(m).map(|p| (m as i64, p)))
                .collect::<Result<_>>()?,
            Family::Custom(ps) => ps
                .iter()
                .take(max_m + 1)
                .cloned()
                .enumerate()
                .map(|(i, p)| (i as i64, p))
                .collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnihilationEntry {
    pub generator: GenId,
    pub index: i64,
    pub image: Poly,
}

impl AnnihilationEntry {
    pub fn is_zero(&self) -> bool {
        self.image.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnihilationReport {
    pub entries: Vec<AnnihilationEntry>,
}

impl AnnihilationReport {
    pub fn pass(&self) -> bool {
        self.entries.iter().all(AnnihilationEntry::is_zero)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AnnihilationEntry> {
        self.entries.iter().filter(|e| !e.is_zero())
    }
}

/// Apply every generator to every family member up to `max_m`.
pub fn annihilation_report(
    gens: &GeneratorSet,
    family: &Family,
    max_m: usize,
    exec: Exec,
) -> Result<AnnihilationReport> {
    let members = family.members(gens.k, max_m)?;
    let pairs: Vec<(&GenId, &WeylOp, i64, &Poly)> = gens
        .gens
        .iter()
        .flat_map(|(id, op)| members.iter().map(move |(m, p)| (id, op, *m, p)))
        .collect();
    let images = exec.map(&pairs, |(_, op, _, p)| op.apply(p));
    let entries = pairs
        .iter()
        .zip(images)
        .map(|((id, _, m, _), img)| {
            img.map(|image| AnnihilationEntry {
                generator: (*id).clone(),
                index: *m,
                image,
            })
        })
        .collect::<Result<_>>()?;
    Ok(AnnihilationReport { entries })
}

/// Annihilation report for an arbitrary list of `(label, operator)` pairs.
pub fn annihilation_report_ops(
    ops: &[(String, WeylOp)],
    family: &Family,
    max_m: usize,
    exec: Exec,
) -> Result<Vec<(String, i64, Poly)>> {
    let k = ops.first().map(|(_, op)| op.k()).unwrap_or(1);
    let members = family.members(k, max_m)?;
    let pairs: Vec<(&String, &WeylOp, i64, &Poly)> = ops
        .iter()
        .flat_map(|(id, op)| members.iter().map(move |(m, p)| (id, op, *m, p)))
        .collect();
    pairs
        .iter()
        .zip(exec.map(&pairs, |(_, op, _, p)| op.apply(p)))
        .map(|((id, _, m, _), img)| img.map(|image| ((*id).clone(), *m, image)))
        .collect()
}

/// Coefficient `c` with `[P, U_0] = c·P`, if one exists.
pub fn u0_eigenvalue(p: &WeylOp) -> Result<Option<Rational>> {
    let k = p.k();
    let comm = p.commutator(&op_u0(k))?;
    let Some((beta, a)) = p.terms().next() else {
        return Ok(Some(Rational::zero()));
    };
    let (e, c) = a.leading().expect("nonzero coefficient");
    let c = comm.coeff(beta).coeff(e) / c.clone();
    Ok((comm == p.scale(&c)).then_some(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::sigma;
    use crate::space::Weight;
    use crate::symfun::newton;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn a_examples() {
        let a = op_a(3, 1, 3, 1).unwrap();
        assert_eq!(a, &(&ds(3, 1) * &ds(3, 3)) - &(&ds(3, 2) * &ds(3, 2)));
        assert!(a.apply(&newton(3, 4)).unwrap().is_zero());
        assert!(op_a(3, 1, 2, 1).unwrap().is_zero());
        assert!(op_a(3, 1, 3, 0).unwrap().is_zero());
        assert!(op_a(3, 3, 1, 1).is_err());
        assert_eq!(op_a(4, 1, 4, 1).unwrap(), -op_a(4, 3, 2, 1).unwrap());
    }

    #[test]
    fn t_examples() {
        let t = op_t(2, 2).unwrap();
        assert_eq!(t.to_string(), "d1^2 + s1*d1*d2 + s2*d2^2 + d2");
        assert!(t.apply(&newton(2, 2)).unwrap().is_zero());
        assert_eq!(op_t0(2, 0).unwrap(), t);
        assert!(op_t(3, 1).is_err());
        assert!(op_t0(3, 2).is_err());
    }

    #[test]
    fn euler_and_nabla() {
        let u0 = op_u0(3);
        let n6 = newton(3, 6);
        assert_eq!(u0.apply(&n6).unwrap(), n6.scale(&q(6)));
        assert_eq!(u0.apply(&sigma(3, 2)).unwrap(), sigma(3, 2).scale(&q(2)));
        assert!(u0.apply(&Poly::one(VarSpace::Sigma(3))).unwrap().is_zero());
        let nabla = op_nabla(3);
        assert_eq!(nabla.apply(&newton(3, 5)).unwrap(), newton(3, 4).scale(&q(5)));
        assert_eq!(nabla.commutator(&op_u0(3)).unwrap(), nabla);
    }

    #[test]
    fn weights_and_eigenvalues() {
        let a = op_a(3, 1, 2 + 1, 1).unwrap();
        assert_eq!(a.weight(), Weight::Pure(-4));
        assert_eq!(u0_eigenvalue(&a).unwrap(), Some(q(4)));
        let t = op_t(3, 2).unwrap();
        assert_eq!(t.weight(), Weight::Pure(-2));
        assert_eq!(u0_eigenvalue(&t).unwrap(), Some(q(2)));
        assert_eq!(u0_eigenvalue(&(&ds(3, 1) + &ds(3, 2))).unwrap(), None);
    }

    #[test]
    fn generator_sets() {
        for k in 2..=5 {
            let sys = GeneratorSet::system(k).unwrap();
            assert_eq!(sys.gens.len(), k * (k - 1) / 2);
            for (id, op) in &sys.gens {
                assert_eq!(op.order(), 2, "{id}");
                assert!(matches!(op.weight(), Weight::Pure(_)));
            }
        }
        assert!(GeneratorSet::system(1).is_err());
    }

    #[test]
    fn gen_id_roundtrip() {
        for id in [GenId::A(1, 3), GenId::T(2), GenId::TForms(3), GenId::TPrimitive(4)] {
            assert_eq!(id.to_string().parse::<GenId>().unwrap(), id);
        }
        assert!("A(1,3,2)".parse::<GenId>().is_err());
        assert!("B(1)".parse::<GenId>().is_err());
    }

    #[test]
    fn report_flags_failures() {
        let gens = GeneratorSet {
            k: 2,
            gens: vec![(GenId::T(2), ds(2, 1))],
        };
        let rep = annihilation_report(&gens, &Family::Newton, 2, Exec::Sequential).unwrap();
        assert!(!rep.pass());
        let first = rep.failures().next().unwrap();
        assert_eq!(first.index, 1);
    }

    #[test]
    fn system_kills_newton_k3() {
        let rep = annihilation_report(
            &GeneratorSet::system_full(3).unwrap(),
            &Family::Newton,
            12,
            Exec::default(),
        )
        .unwrap();
        assert!(rep.pass());
        let forms = GeneratorSet::with_variant(3, Variant::Forms).unwrap();
        assert!(annihilation_report(&forms, &Family::DNewton, 12, Exec::default())
            .unwrap()
            .pass());
    }
}

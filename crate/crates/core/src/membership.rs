//! Left-ideal membership modulo the annihilator system by symbol descent.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::annihilators::{GenId, GeneratorSet};
use crate::charvar::decompose_in_minors;
use crate::error::{Error, Result};
use crate::json::WeylJson;
use crate::poly::Poly;
use crate::space::VarSpace;
use crate::symfun::NewtonFamily;
use crate::weyl::WeylOp;

/// `input = Σ cofactor ∘ generator + remainder`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipCertificate {
    pub k: usize,
    pub newton_bound: usize,
    pub entries: Vec<(GenId, WeylOp)>,
    pub remainder: WeylOp,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Member,
    /// The operator does not kill `N_index`.
    NonMember {
        index: usize,
        image: Poly,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub verdict: Verdict,
    pub certificate: MembershipCertificate,
    /// Operator order after each descent step, starting with the input.
    pub orders: Vec<u32>,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        self.verdict == Verdict::Member
    }
}

pub fn default_newton_bound(p: &WeylOp) -> usize {
    p.order() as usize + 2 * p.k() + 4
}

/// Generator lifting a minor, with the sign relating their symbols.
fn generator_for_minor(i: usize, j: usize) -> (GenId, bool) {
    if i == 1 {
        (GenId::T(j), true)
    } else {
        (GenId::A(i - 1, j), false)
    }
}

/// Reduce `p` modulo the system by repeatedly cancelling its symbol.
pub fn reduce_modulo_system(p: &WeylOp, newton_bound: Option<usize>) -> Result<Membership> {
    let VarSpace::Sigma(k) = p.space() else {
        return Err(Error::SpaceMismatch(p.space(), VarSpace::Sigma(p.k())));
    };
    if p.is_zero() {
        return Err(Error::ZeroOperator);
    }
    if k < 2 {
        return Err(Error::OutOfRange("membership needs k ≥ 2".into()));
    }
    let bound = newton_bound.unwrap_or_else(|| default_newton_bound(p));
    let fam = NewtonFamily::new(k);
    for m in 0..=bound {
        let image = p.apply(&fam.newton(m))?;
        if !image.is_zero() {
            return Ok(Membership {
                verdict: Verdict::NonMember { index: m, image },
                certificate: MembershipCertificate {
                    k,
                    newton_bound: bound,
                    entries: Vec::new(),
                    remainder: p.clone(),
                },
                orders: vec![p.order()],
            });
        }
    }
    let system = GeneratorSet::system(k)?;
    let mut cofactors: BTreeMap<GenId, WeylOp> = BTreeMap::new();
    let mut cur = p.clone();
    let mut orders = vec![cur.order()];
    while !cur.is_zero() {
        let order = cur.order();
        if order <= 1 {
            return Err(Error::Internal(format!(
                "order {order} remainder {cur} kills N_0..N_{bound} but is nonzero"
            )));
        }
        let sym = cur.symbol()?;
        let coeffs = decompose_in_minors(&sym).map_err(|e| match e {
            Error::NotOnVariety => Error::Internal(format!(
                "symbol {sym} does not vanish on Z although N_0..N_{bound} are killed: bound too low or paper contradiction"
            )),
            other => other,
        })?;
        let mut step = WeylOp::zero(cur.space());
        for ((i, j), c) in coeffs {
            let (id, positive) = generator_for_minor(i, j);
            let lifted = WeylOp::from_symbol(&c)?;
            let cof = if positive { lifted } else { -lifted };
            let gen = system
                .get(&id)
                .ok_or_else(|| Error::Internal(format!("missing generator {id}")))?;
            step = &step + &(&cof * gen);
            let slot = cofactors.entry(id).or_insert_with(|| WeylOp::zero(cur.space()));
            *slot = &*slot + &cof;
        }
        cur = &cur - &step;
        if !cur.is_zero() && cur.order() >= order {
            return Err(Error::Internal(format!("descent stalled at order {order}")));
        }
        orders.push(cur.order());
    }
    let entries = cofactors.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    Ok(Membership {
        verdict: Verdict::Member,
        certificate: MembershipCertificate {
            k,
            newton_bound: bound,
            entries,
            remainder: cur,
        },
        orders,
    })
}

/// `Σ cofactor ∘ generator + remainder == p`.
pub fn verify_certificate(p: &WeylOp, cert: &MembershipCertificate) -> Result<bool> {
    let mut sum = cert.remainder.clone();
    for (id, cof) in &cert.entries {
        sum = sum.checked_add(&cof.checked_mul(&id.op(cert.k)?)?)?;
    }
    Ok(sum == *p)
}

/// Membership in the left ideal generated by `∂_{x_i}∂_{x_j}`, `i ≠ j`:
/// every normal-form term must involve two distinct derivatives.
pub fn trace_characterization_x(p: &WeylOp) -> Result<bool> {
    if !matches!(p.space(), VarSpace::X(_)) {
        return Err(Error::SpaceMismatch(p.space(), VarSpace::X(p.k())));
    }
    Ok(p.terms()
        .all(|(beta, _)| beta.0.iter().filter(|&&b| b > 0).count() >= 2))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateEntryJson {
    pub generator: GenId,
    pub cofactor: WeylJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub k: usize,
    pub newton_bound: usize,
    pub entries: Vec<CertificateEntryJson>,
    pub remainder: WeylJson,
}

impl From<&MembershipCertificate> for CertificateJson {
    fn from(c: &MembershipCertificate) -> Self {
        CertificateJson {
            k: c.k,
            newton_bound: c.newton_bound,
            entries: c
                .entries
                .iter()
                .map(|(g, op)| CertificateEntryJson {
                    generator: g.clone(),
                    cofactor: op.into(),
                })
                .collect(),
            remainder: (&c.remainder).into(),
        }
    }
}

impl TryFrom<&CertificateJson> for MembershipCertificate {
    type Error = Error;

    fn try_from(j: &CertificateJson) -> Result<Self> {
        Ok(MembershipCertificate {
            k: j.k,
            newton_bound: j.newton_bound,
            entries: j
                .entries
                .iter()
                .map(|e| WeylOp::try_from(&e.cofactor).map(|op| (e.generator.clone(), op)))
                .collect::<Result<_>>()?,
            remainder: WeylOp::try_from(&j.remainder)?,
        })
    }
}

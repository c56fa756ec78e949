//! Variable spaces and the weight grading.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Family of an indexed variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    X,
    Sigma,
    Eta,
    Xi,
    /// The single auxiliary variable (root coordinate `z`, chart parameter `t`).
    T,
}

/// A single variable, 1-based within its family. `T` always has index 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Var {
    pub family: Family,
    pub index: usize,
}

impl Var {
    pub fn x(i: usize) -> Self {
        Var {
            family: Family::X,
            index: i,
        }
    }
    pub fn sigma(i: usize) -> Self {
        Var {
            family: Family::Sigma,
            index: i,
        }
    }
    pub fn eta(i: usize) -> Self {
        Var {
            family: Family::Eta,
            index: i,
        }
    }
    pub fn xi(i: usize) -> Self {
        Var {
            family: Family::Xi,
            index: i,
        }
    }
    pub fn t() -> Self {
        Var {
            family: Family::T,
            index: 1,
        }
    }

    /// Quasi-homogeneous weight: `x ↦ 1`, `σ_h ↦ h`, `η_h ↦ -h`, `ξ ↦ -1`, `t ↦ 1`.
    pub fn weight(&self) -> i64 {
        match self.family {
            Family::X | Family::T => 1,
            Family::Sigma => self.index as i64,
            Family::Eta => -(self.index as i64),
            Family::Xi => -1,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::X => write!(f, "x{}", self.index),
            Family::Sigma => write!(f, "s{}", self.index),
            Family::Eta => write!(f, "e{}", self.index),
            Family::Xi => write!(f, "xi{}", self.index),
            Family::T => write!(f, "t"),
        }
    }
}

/// The set of variables a polynomial or operator lives over, with `k` the
/// number of indexed variables per family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum VarSpace {
    /// `x1..xk`
    X(usize),
    /// `σ1..σk`
    Sigma(usize),
    /// `η1..ηk`
    Eta(usize),
    /// `σ1..σk, η1..ηk` (cotangent space over σ).
    Mixed(usize),
    /// `x1..xk, ξ1..ξk` (cotangent space over x).
    XiMixed(usize),
    /// `σ1..σk, t`
    Aux(usize),
}

impl VarSpace {
    pub fn k(&self) -> usize {
        match *self {
            VarSpace::X(k)
            | VarSpace::Sigma(k)
            | VarSpace::Eta(k)
            | VarSpace::Mixed(k)
            | VarSpace::XiMixed(k)
            | VarSpace::Aux(k) => k,
        }
    }

    pub fn nvars(&self) -> usize {
        match *self {
            VarSpace::X(k) | VarSpace::Sigma(k) | VarSpace::Eta(k) => k,
            VarSpace::Mixed(k) | VarSpace::XiMixed(k) => 2 * k,
            VarSpace::Aux(k) => k + 1,
        }
    }

    /// Variable at a flat position.
    pub fn var(&self, pos: usize) -> Var {
        let k = self.k();
        assert!(pos < self.nvars(), "position {pos} out of range for {self}");
        match *self {
            VarSpace::X(_) => Var::x(pos + 1),
            VarSpace::Sigma(_) => Var::sigma(pos + 1),
            VarSpace::Eta(_) => Var::eta(pos + 1),
            VarSpace::Mixed(_) if pos < k => Var::sigma(pos + 1),
            VarSpace::Mixed(_) => Var::eta(pos - k + 1),
            VarSpace::XiMixed(_) if pos < k => Var::x(pos + 1),
            VarSpace::XiMixed(_) => Var::xi(pos - k + 1),
            VarSpace::Aux(_) if pos < k => Var::sigma(pos + 1),
            VarSpace::Aux(_) => Var::t(),
        }
    }

    /// Flat position of a variable, if it belongs to this space.
    pub fn position(&self, v: Var) -> Result<usize> {
        let k = self.k();
        let in_range = (1..=k).contains(&v.index);
        let pos = match (*self, v.family) {
            (VarSpace::X(_), Family::X)
            | (VarSpace::Sigma(_), Family::Sigma)
            | (VarSpace::Eta(_), Family::Eta)
            | (VarSpace::Mixed(_), Family::Sigma)
            | (VarSpace::XiMixed(_), Family::X)
            | (VarSpace::Aux(_), Family::Sigma)
                if in_range =>
            {
                Some(v.index - 1)
            }
            (VarSpace::Mixed(_), Family::Eta) | (VarSpace::XiMixed(_), Family::Xi) if in_range => Some(k + v.index - 1),
            (VarSpace::Aux(_), Family::T) if v.index == 1 => Some(k),
            _ => None,
        };
        pos.ok_or_else(|| Error::UnknownVariable {
            var: v.to_string(),
            space: *self,
        })
    }

    pub fn weights(&self) -> Vec<i64> {
        (0..self.nvars()).map(|p| self.var(p).weight()).collect()
    }

    /// Coordinate space a differential operator over this space differentiates.
    pub fn is_coordinate_space(&self) -> bool {
        matches!(self, VarSpace::X(_) | VarSpace::Sigma(_))
    }

    /// Cotangent space carrying the symbols of operators over `self`.
    pub fn cotangent(&self) -> Result<VarSpace> {
        match *self {
            VarSpace::Sigma(k) => Ok(VarSpace::Mixed(k)),
            VarSpace::X(k) => Ok(VarSpace::XiMixed(k)),
            other => Err(Error::OutOfRange(format!("{other} is not a coordinate space"))),
        }
    }

    /// Name used by the JSON encoding, e.g. `sigma3`.
    pub fn tag(&self) -> String {
        let (name, k) = match *self {
            VarSpace::X(k) => ("x", k),
            VarSpace::Sigma(k) => ("sigma", k),
            VarSpace::Eta(k) => ("eta", k),
            VarSpace::Mixed(k) => ("mixed", k),
            VarSpace::XiMixed(k) => ("ximixed", k),
            VarSpace::Aux(k) => ("aux", k),
        };
        format!("{name}{k}")
    }
}

impl fmt::Display for VarSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

impl FromStr for VarSpace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let split = s
            .find(|c: char| c.is_ascii_digit())
            .ok_or_else(|| Error::Parse(format!("bad space {s:?}")))?;
        let (name, k) = s.split_at(split);
        let k: usize = k.parse().map_err(|_| Error::Parse(format!("bad space {s:?}")))?;
        if k == 0 {
            return Err(Error::Parse(format!("bad space {s:?}: k must be positive")));
        }
        Ok(match name {
            "x" => VarSpace::X(k),
            "sigma" => VarSpace::Sigma(k),
            "eta" => VarSpace::Eta(k),
            "mixed" => VarSpace::Mixed(k),
            "ximixed" => VarSpace::XiMixed(k),
            "aux" => VarSpace::Aux(k),
            _ => return Err(Error::Parse(format!("bad space {s:?}"))),
        })
    }
}

impl TryFrom<String> for VarSpace {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<VarSpace> for String {
    fn from(v: VarSpace) -> String {
        v.tag()
    }
}

/// Quasi-homogeneous weight of a polynomial or operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weight {
    Pure(i64),
    NonPure,
}

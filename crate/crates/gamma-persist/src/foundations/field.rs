use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rat::Rat;
use crate::error::{Error, Result};

/// Coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldId {
    #[default]
    F2,
    Q,
}

impl FieldId {
    pub fn parse(s: &str) -> Result<FieldId> {
        match s.trim().to_ascii_lowercase().as_str() {
            "f2" => Ok(FieldId::F2),
            "q" => Ok(FieldId::Q),
            other => Err(Error::Parse(format!("unknown field {other:?}"))),
        }
    }

    pub fn zero(self) -> FieldElem {
        match self {
            FieldId::F2 => FieldElem::F2(false),
            FieldId::Q => FieldElem::Q(Rat::zero()),
        }
    }

    pub fn one(self) -> FieldElem {
        match self {
            FieldId::F2 => FieldElem::F2(true),
            FieldId::Q => FieldElem::Q(Rat::one()),
        }
    }

    /// Image of a rational; over F2 the value must be an integer.
    pub fn from_rat(self, r: &Rat) -> Result<FieldElem> {
        match self {
            FieldId::Q => Ok(FieldElem::Q(r.clone())),
            FieldId::F2 => {
                if !r.is_integer() {
                    return Err(Error::Parse(format!("{r} is not an element of F2")));
                }
                Ok(FieldElem::F2(r.to_integer().is_odd()))
            }
        }
    }

    pub fn from_i64(self, v: i64) -> FieldElem {
        match self {
            FieldId::F2 => FieldElem::F2(v.rem_euclid(2) == 1),
            FieldId::Q => FieldElem::Q(Rat::from_integer(v.into())),
        }
    }
}

impl fmt::Display for FieldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldId::F2 => "f2",
            FieldId::Q => "q",
        })
    }
}

/// Element of a coefficient field; elements of distinct fields never mix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElem {
    F2(bool),
    Q(Rat),
}

impl FieldElem {
    pub fn field(&self) -> FieldId {
        match self {
            FieldElem::F2(_) => FieldId::F2,
            FieldElem::Q(_) => FieldId::Q,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::F2(b) => !b,
            FieldElem::Q(r) => r.is_zero(),
        }
    }

    pub fn add(&self, o: &FieldElem) -> Result<FieldElem> {
        match (self, o) {
            (FieldElem::F2(a), FieldElem::F2(b)) => Ok(FieldElem::F2(a ^ b)),
            (FieldElem::Q(a), FieldElem::Q(b)) => Ok(FieldElem::Q(a + b)),
            _ => Err(Error::FieldMismatch),
        }
    }

    pub fn sub(&self, o: &FieldElem) -> Result<FieldElem> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &FieldElem) -> Result<FieldElem> {
        match (self, o) {
            (FieldElem::F2(a), FieldElem::F2(b)) => Ok(FieldElem::F2(a & b)),
            (FieldElem::Q(a), FieldElem::Q(b)) => Ok(FieldElem::Q(a * b)),
            _ => Err(Error::FieldMismatch),
        }
    }

    pub fn neg(&self) -> FieldElem {
        match self {
            FieldElem::F2(b) => FieldElem::F2(*b),
            FieldElem::Q(r) => FieldElem::Q(-r),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<FieldElem> {
        match self {
            FieldElem::F2(true) => Some(FieldElem::F2(true)),
            FieldElem::F2(false) => None,
            FieldElem::Q(r) if r.is_zero() => None,
            FieldElem::Q(r) => Some(FieldElem::Q(r.recip())),
        }
    }

    pub fn to_rat(&self) -> Rat {
        match self {
            FieldElem::F2(b) => Rat::from_integer(i64::from(*b).into()),
            FieldElem::Q(r) => r.clone(),
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_rat())
    }
}

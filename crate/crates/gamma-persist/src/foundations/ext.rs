use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;

use super::rat::{parse_rat, Rat};
use crate::error::{Error, Result};

/// Rational extended by two infinities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtRat {
    NegInf,
    Finite(Rat),
    PosInf,
}

/// Total order: `-inf < finite < +inf`.
pub fn ext_cmp(x: &ExtRat, y: &ExtRat) -> Ordering {
    x.cmp(y)
}

impl ExtRat {
    pub fn finite(r: Rat) -> Self {
        ExtRat::Finite(r)
    }

    pub fn zero() -> Self {
        ExtRat::Finite(Rat::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRat::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&Rat> {
        match self {
            ExtRat::Finite(r) => Some(r),
            _ => None,
        }
    }

    pub fn neg(&self) -> ExtRat {
        match self {
            ExtRat::NegInf => ExtRat::PosInf,
            ExtRat::PosInf => ExtRat::NegInf,
            ExtRat::Finite(r) => ExtRat::Finite(-r),
        }
    }

    /// Sum; `+inf + -inf` is undefined.
    pub fn add(&self, other: &ExtRat) -> Result<ExtRat> {
        use ExtRat::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Ok(Finite(a + b)),
            (NegInf, PosInf) | (PosInf, NegInf) => {
                Err(Error::Undefined("infinity minus infinity".into()))
            }
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
        }
    }

    pub fn sub(&self, other: &ExtRat) -> Result<ExtRat> {
        self.add(&other.neg())
    }

    /// Translation by a finite amount.
    pub fn shift(&self, by: &Rat) -> ExtRat {
        match self {
            ExtRat::Finite(r) => ExtRat::Finite(r + by),
            other => other.clone(),
        }
    }

    pub fn parse(s: &str) -> Result<ExtRat> {
        match s.trim() {
            "-inf" | "-infinity" => Ok(ExtRat::NegInf),
            "+inf" | "inf" | "+infinity" | "infinity" => Ok(ExtRat::PosInf),
            t => parse_rat(t).map(ExtRat::Finite),
        }
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::NegInf => f.write_str("-inf"),
            ExtRat::PosInf => f.write_str("+inf"),
            ExtRat::Finite(r) => write!(f, "{r}"),
        }
    }
}

impl serde::Serialize for ExtRat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for ExtRat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        ExtRat::parse(&s).map_err(serde::de::Error::custom)
    }
}

impl From<Rat> for ExtRat {
    fn from(r: Rat) -> Self {
        ExtRat::Finite(r)
    }
}

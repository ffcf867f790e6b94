use std::fmt;

use crate::error::{Error, Result};
use crate::foundations::{ExtRat, Rat};

/// Non-empty convex subset of the real line.
///
/// Field order gives the canonical sort `(lower, lower_closed, upper, upper_closed)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    lower: ExtRat,
    lower_closed: bool,
    upper: ExtRat,
    upper_closed: bool,
}

impl Interval {
    pub fn new(lower: ExtRat, upper: ExtRat, lower_closed: bool, upper_closed: bool) -> Result<Interval> {
        if (lower_closed && !lower.is_finite()) || (upper_closed && !upper.is_finite()) {
            return Err(Error::Invalid("an infinite endpoint cannot be closed".into()));
        }
        if lower == ExtRat::PosInf || upper == ExtRat::NegInf {
            return Err(Error::Invalid("interval is empty".into()));
        }
        let ok = lower < upper || (lower == upper && lower_closed && upper_closed);
        if !ok {
            return Err(Error::Invalid(format!(
                "empty interval {}",
                Interval { lower, lower_closed, upper, upper_closed }
            )));
        }
        Ok(Interval { lower, lower_closed, upper, upper_closed })
    }

    fn fin(lo: &Rat, hi: &Rat, lc: bool, uc: bool) -> Result<Interval> {
        Interval::new(ExtRat::Finite(lo.clone()), ExtRat::Finite(hi.clone()), lc, uc)
    }

    /// `[a,b]`
    pub fn closed(a: &Rat, b: &Rat) -> Result<Interval> {
        Interval::fin(a, b, true, true)
    }

    /// `(a,b)`
    pub fn open(a: &Rat, b: &Rat) -> Result<Interval> {
        Interval::fin(a, b, false, false)
    }

    /// `[a,b)`
    pub fn closed_open(a: &Rat, b: &Rat) -> Result<Interval> {
        Interval::fin(a, b, true, false)
    }

    /// `(a,b]`
    pub fn open_closed(a: &Rat, b: &Rat) -> Result<Interval> {
        Interval::fin(a, b, false, true)
    }

    pub fn singleton(a: &Rat) -> Interval {
        Interval::fin(a, a, true, true).expect("singleton")
    }

    pub fn real_line() -> Interval {
        Interval { lower: ExtRat::NegInf, lower_closed: false, upper: ExtRat::PosInf, upper_closed: false }
    }

    /// Half-open bar `[a,b)`, or `(-inf,b)` when `a = -inf`.
    pub fn gamma(a: ExtRat, b: ExtRat) -> Result<Interval> {
        let lc = a.is_finite();
        Interval::new(a, b, lc, false)
    }

    pub fn lower(&self) -> &ExtRat {
        &self.lower
    }

    pub fn upper(&self) -> &ExtRat {
        &self.upper
    }

    pub fn lower_closed(&self) -> bool {
        self.lower_closed
    }

    pub fn upper_closed(&self) -> bool {
        self.upper_closed
    }

    pub fn is_singleton(&self) -> bool {
        self.lower == self.upper
    }

    pub fn is_bounded(&self) -> bool {
        self.lower.is_finite() && self.upper.is_finite()
    }

    /// Closed in the real line.
    pub fn is_closed_set(&self) -> bool {
        (self.lower_closed || !self.lower.is_finite()) && (self.upper_closed || !self.upper.is_finite())
    }

    /// Open in the real line.
    pub fn is_open_set(&self) -> bool {
        !self.lower_closed && !self.upper_closed
    }

    /// Of the form `[a,b)` with `a` possibly `-inf`.
    pub fn is_gamma_bar(&self) -> bool {
        !self.upper_closed && (self.lower_closed || self.lower == ExtRat::NegInf)
    }

    pub fn contains(&self, x: &Rat) -> bool {
        let x = ExtRat::Finite(x.clone());
        let lo = if self.lower_closed { self.lower <= x } else { self.lower < x };
        let hi = if self.upper_closed { x <= self.upper } else { x < self.upper };
        lo && hi
    }

    pub fn intersect(&self, o: &Interval) -> Option<Interval> {
        let (lower, lower_closed) = match self.lower.cmp(&o.lower) {
            std::cmp::Ordering::Less => (o.lower.clone(), o.lower_closed),
            std::cmp::Ordering::Greater => (self.lower.clone(), self.lower_closed),
            std::cmp::Ordering::Equal => (self.lower.clone(), self.lower_closed && o.lower_closed),
        };
        let (upper, upper_closed) = match self.upper.cmp(&o.upper) {
            std::cmp::Ordering::Less => (self.upper.clone(), self.upper_closed),
            std::cmp::Ordering::Greater => (o.upper.clone(), o.upper_closed),
            std::cmp::Ordering::Equal => (self.upper.clone(), self.upper_closed && o.upper_closed),
        };
        Interval::new(lower, upper, lower_closed, upper_closed).ok()
    }

    /// Image under `x -> x + t`.
    pub fn translate(&self, t: &Rat) -> Interval {
        Interval {
            lower: self.lower.shift(t),
            lower_closed: self.lower_closed,
            upper: self.upper.shift(t),
            upper_closed: self.upper_closed,
        }
    }

    /// Image under `x -> -x`.
    pub fn reflect(&self) -> Interval {
        Interval {
            lower: self.upper.neg(),
            lower_closed: self.upper_closed,
            upper: self.lower.neg(),
            upper_closed: self.lower_closed,
        }
    }

    /// Finite endpoints, without repetition.
    pub fn finite_endpoints(&self) -> Vec<Rat> {
        let mut v: Vec<Rat> = [&self.lower, &self.upper].iter().filter_map(|e| e.as_finite().cloned()).collect();
        v.dedup();
        v
    }

    /// True when `self ∩ other` is closed in `self` (assumes the intersection is non-empty).
    pub(crate) fn sub_closed_in(&self, k: &Interval) -> bool {
        let lo_bad = k.lower.is_finite() && !k.lower_closed && self.contains(k.lower.as_finite().unwrap());
        let hi_bad = k.upper.is_finite() && !k.upper_closed && self.contains(k.upper.as_finite().unwrap());
        !lo_bad && !hi_bad
    }

    /// True when `k ⊆ self` is open in `self`.
    pub(crate) fn sub_open_in(&self, k: &Interval) -> bool {
        let lo_bad = k.lower_closed && k.lower != self.lower;
        let hi_bad = k.upper_closed && k.upper != self.upper;
        !lo_bad && !hi_bad
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_singleton() {
            return write!(f, "{{{}}}", self.lower);
        }
        write!(
            f,
            "{}{},{}{}",
            if self.lower_closed { '[' } else { '(' },
            self.lower,
            self.upper,
            if self.upper_closed { ']' } else { ')' }
        )
    }
}

impl std::str::FromStr for Interval {
    type Err = Error;

    /// Parses `[a,b)`, `(a,b]`, `{a}` and friends; endpoints accept `-inf`/`+inf`.
    fn from_str(s: &str) -> Result<Interval> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad interval '{s}'"));
        if let Some(inner) = s.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            let a = crate::foundations::parse_rat(inner.trim())?;
            return Ok(Interval::singleton(&a));
        }
        let mut chars = s.chars();
        let lc = match chars.next() {
            Some('[') => true,
            Some('(') => false,
            _ => return Err(bad()),
        };
        let uc = match s.chars().last() {
            Some(']') => true,
            Some(')') => false,
            _ => return Err(bad()),
        };
        let body = &s[1..s.len() - 1];
        let (a, b) = body.split_once(',').ok_or_else(bad)?;
        let lo = ExtRat::parse(a.trim()).map_err(|_| bad())?;
        let hi = ExtRat::parse(b.trim()).map_err(|_| bad())?;
        Interval::new(lo, hi, lc, uc).map_err(|e| Error::Parse(format!("{s}: {e}")))
    }
}

/// Half-open bar `[birth, death)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GammaBar {
    pub birth: ExtRat,
    pub death: ExtRat,
}

impl GammaBar {
    pub fn new(birth: ExtRat, death: ExtRat) -> Result<GammaBar> {
        Interval::gamma(birth.clone(), death.clone())?;
        Ok(GammaBar { birth, death })
    }

    pub fn interval(&self) -> Interval {
        Interval::gamma(self.birth.clone(), self.death.clone()).expect("validated at construction")
    }

    pub fn from_interval(i: &Interval) -> Option<GammaBar> {
        i.is_gamma_bar().then(|| GammaBar { birth: i.lower.clone(), death: i.upper.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::rat;

    #[test]
    fn rejects_invalid() {
        assert!(Interval::new(ExtRat::NegInf, ExtRat::zero(), true, false).is_err());
        assert!(Interval::open(&rat(1, 1), &rat(1, 1)).is_err());
        assert!(Interval::closed_open(&rat(2, 1), &rat(1, 1)).is_err());
        assert!(Interval::closed(&rat(1, 1), &rat(1, 1)).is_ok());
    }

    #[test]
    fn intersection_flags() {
        let a = Interval::closed_open(&rat(0, 1), &rat(2, 1)).unwrap();
        let b = Interval::closed_open(&rat(1, 1), &rat(3, 1)).unwrap();
        assert_eq!(a.intersect(&b).unwrap(), Interval::closed_open(&rat(1, 1), &rat(2, 1)).unwrap());
        let c = Interval::closed_open(&rat(2, 1), &rat(3, 1)).unwrap();
        assert!(a.intersect(&c).is_none());
        let d = Interval::closed(&rat(2, 1), &rat(3, 1)).unwrap();
        let e = Interval::closed(&rat(0, 1), &rat(2, 1)).unwrap();
        assert_eq!(d.intersect(&e).unwrap(), Interval::singleton(&rat(2, 1)));
    }

    #[test]
    fn display() {
        assert_eq!(Interval::closed_open(&rat(0, 1), &rat(1, 2)).unwrap().to_string(), "[0,1/2)");
        assert_eq!(Interval::real_line().to_string(), "(-inf,+inf)");
        assert_eq!(Interval::singleton(&rat(3, 1)).to_string(), "{3}");
    }
}

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::lp::{maximize, Lp};
use crate::error::{Error, Result};
use crate::foundations::Rat;

pub type Vector = Vec<Rat>;

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `{x : ⟨normal,x⟩ ≤ offset}`, or `<` when strict.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfSpace {
    #[serde(with = "rat_vec")]
    pub normal: Vector,
    #[serde(with = "rat_str")]
    pub offset: Rat,
    pub strict: bool,
}

impl HalfSpace {
    pub fn new(normal: Vector, offset: Rat, strict: bool) -> Result<HalfSpace> {
        if normal.iter().all(Zero::is_zero) {
            return Err(Error::Invalid("half-space normal must be non-zero".into()));
        }
        Ok(HalfSpace { normal, offset, strict })
    }

    pub fn weak(normal: Vector, offset: Rat) -> HalfSpace {
        HalfSpace::new(normal, offset, false).expect("non-zero normal")
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        let v = dot(&self.normal, x);
        if self.strict {
            v < self.offset
        } else {
            v <= self.offset
        }
    }

    /// Closure of the complement.
    pub fn negate(&self) -> HalfSpace {
        HalfSpace {
            normal: self.normal.iter().map(|v| -v).collect(),
            offset: -self.offset.clone(),
            strict: !self.strict,
        }
    }

    /// Scales to a primitive integer normal so that equal half-spaces compare equal.
    fn normalized(&self) -> HalfSpace {
        let mut l = num_bigint::BigInt::one();
        for v in self.normal.iter().chain(std::iter::once(&self.offset)) {
            l = l.lcm(v.denom());
        }
        let ints: Vec<num_bigint::BigInt> =
            self.normal.iter().map(|v| (v * Rat::from_integer(l.clone())).to_integer()).collect();
        let mut g = num_bigint::BigInt::zero();
        for v in &ints {
            g = g.gcd(v);
        }
        let s = Rat::from_integer(l) / Rat::from_integer(g);
        HalfSpace {
            normal: self.normal.iter().map(|v| v * &s).collect(),
            offset: &self.offset * &s,
            strict: self.strict,
        }
    }
}

/// Finite intersection of open and closed affine half-spaces.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HPolyhedron {
    pub dim: usize,
    pub constraints: Vec<HalfSpace>,
}

impl PartialEq for HPolyhedron {
    fn eq(&self, o: &HPolyhedron) -> bool {
        self.dim == o.dim && self.contains(o) && o.contains(self)
    }
}

impl HPolyhedron {
    pub fn new(dim: usize, constraints: Vec<HalfSpace>) -> Result<HPolyhedron> {
        if dim == 0 {
            return Err(Error::Invalid("dimension must be positive".into()));
        }
        if constraints.iter().any(|c| c.normal.len() != dim) {
            return Err(Error::Shape("constraint normal has the wrong length".into()));
        }
        Ok(HPolyhedron { dim, constraints })
    }

    pub fn universe(dim: usize) -> HPolyhedron {
        HPolyhedron { dim, constraints: Vec::new() }
    }

    pub fn empty(dim: usize) -> HPolyhedron {
        let e = unit(dim, 0);
        let z = Rat::zero();
        HPolyhedron {
            dim,
            constraints: vec![HalfSpace::weak(e.clone(), z.clone()), HalfSpace::weak(e.iter().map(|v| -v).collect(), -Rat::one())],
        }
    }

    /// Builds from `(normal, offset, strict)` rows; rows with zero normal are
    /// evaluated and either dropped or make the result empty.
    pub fn from_rows(dim: usize, rows: Vec<(Vector, Rat, bool)>) -> HPolyhedron {
        let mut cs = Vec::new();
        for (n, b, s) in rows {
            if n.iter().all(Zero::is_zero) {
                let ok = if s { Rat::zero() < b } else { Rat::zero() <= b };
                if !ok {
                    return HPolyhedron::empty(dim);
                }
            } else {
                cs.push(HalfSpace { normal: n, offset: b, strict: s });
            }
        }
        HPolyhedron { dim, constraints: cs }
    }

    /// Axis box with per-coordinate bounds and flags `(lo, lo_closed, hi, hi_closed)`.
    pub fn box_from(bounds: &[(Rat, bool, Rat, bool)]) -> HPolyhedron {
        let dim = bounds.len();
        let mut cs = Vec::new();
        for (i, (lo, lc, hi, hc)) in bounds.iter().enumerate() {
            let e = unit(dim, i);
            cs.push(HalfSpace { normal: e.iter().map(|v| -v).collect(), offset: -lo.clone(), strict: !lc });
            cs.push(HalfSpace { normal: e, offset: hi.clone(), strict: !hc });
        }
        HPolyhedron { dim, constraints: cs }
    }

    pub fn singleton(p: &[Rat]) -> HPolyhedron {
        let dim = p.len();
        let mut cs = Vec::new();
        for (i, x) in p.iter().enumerate() {
            let e = unit(dim, i);
            cs.push(HalfSpace { normal: e.iter().map(|v| -v).collect(), offset: -x.clone(), strict: false });
            cs.push(HalfSpace { normal: e, offset: x.clone(), strict: false });
        }
        HPolyhedron { dim, constraints: cs }
    }

    pub fn contains_point(&self, x: &[Rat]) -> bool {
        self.constraints.iter().all(|c| c.contains(x))
    }

    /// A point of the set, maximizing the slack of strict constraints.
    pub fn witness(&self) -> Option<Vector> {
        let strict: Vec<bool> = self.constraints.iter().map(|c| c.strict).collect();
        if !strict.iter().any(|s| *s) {
            let a: Vec<Vector> = self.constraints.iter().map(|c| c.normal.clone()).collect();
            let b: Vec<Rat> = self.constraints.iter().map(|c| c.offset.clone()).collect();
            return match maximize(&a, &b, &vec![Rat::zero(); self.dim]) {
                Lp::Optimal { point, .. } => Some(point),
                _ => None,
            };
        }
        // maximize t with ⟨n,x⟩ + t ≤ b on strict rows and t ≤ 1
        let mut a = Vec::new();
        let mut b = Vec::new();
        for c in &self.constraints {
            let mut row = c.normal.clone();
            row.push(if c.strict { Rat::one() } else { Rat::zero() });
            a.push(row);
            b.push(c.offset.clone());
        }
        let mut cap = vec![Rat::zero(); self.dim];
        cap.push(Rat::one());
        a.push(cap);
        b.push(Rat::one());
        let mut obj = vec![Rat::zero(); self.dim];
        obj.push(Rat::one());
        match maximize(&a, &b, &obj) {
            Lp::Optimal { value, mut point } if value.is_positive() => {
                point.pop();
                Some(point)
            }
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.witness().is_none()
    }

    pub fn intersect(&self, o: &HPolyhedron) -> HPolyhedron {
        let mut cs = self.constraints.clone();
        cs.extend(o.constraints.iter().cloned());
        HPolyhedron { dim: self.dim, constraints: cs }
    }

    pub fn with(&self, c: HalfSpace) -> HPolyhedron {
        let mut cs = self.constraints.clone();
        cs.push(c);
        HPolyhedron { dim: self.dim, constraints: cs }
    }

    /// `o ⊆ self`.
    pub fn contains(&self, o: &HPolyhedron) -> bool {
        if o.is_empty() {
            return true;
        }
        self.constraints.iter().all(|c| o.with(c.negate()).is_empty())
    }

    /// Weak constraints that hold with equality on the whole set.
    pub fn implicit_equalities(&self) -> Vec<usize> {
        (0..self.constraints.len())
            .filter(|&i| {
                let c = &self.constraints[i];
                !c.strict && self.with(HalfSpace { strict: true, ..c.clone() }).is_empty()
            })
            .collect()
    }

    pub fn is_full_dimensional(&self) -> bool {
        !self.is_empty() && self.implicit_equalities().is_empty()
    }

    pub fn closure(&self) -> HPolyhedron {
        if self.is_empty() {
            return HPolyhedron::empty(self.dim);
        }
        let cs = self.constraints.iter().map(|c| HalfSpace { strict: false, ..c.clone() }).collect();
        HPolyhedron { dim: self.dim, constraints: cs }
    }

    pub fn interior(&self) -> HPolyhedron {
        if !self.is_full_dimensional() {
            return HPolyhedron::empty(self.dim);
        }
        let cs = self.constraints.iter().map(|c| HalfSpace { strict: true, ..c.clone() }).collect();
        HPolyhedron { dim: self.dim, constraints: cs }
    }

    /// Removes duplicate and redundant constraints; the empty set maps to a fixed form.
    pub fn canonicalize(&self) -> HPolyhedron {
        if self.is_empty() {
            return HPolyhedron::empty(self.dim);
        }
        let mut cs: Vec<HalfSpace> = self.constraints.iter().map(HalfSpace::normalized).collect();
        cs.sort();
        cs.dedup();
        let mut i = 0;
        while i < cs.len() {
            let rest = HPolyhedron {
                dim: self.dim,
                constraints: cs.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, c)| c.clone()).collect(),
            };
            if rest.with(cs[i].negate()).is_empty() {
                cs.remove(i);
            } else {
                i += 1;
            }
        }
        HPolyhedron { dim: self.dim, constraints: cs }
    }

    pub fn translate(&self, t: &[Rat]) -> HPolyhedron {
        let cs = self
            .constraints
            .iter()
            .map(|c| HalfSpace { offset: &c.offset + dot(&c.normal, t), ..c.clone() })
            .collect();
        HPolyhedron { dim: self.dim, constraints: cs }
    }

    /// Image under `x ↦ -x`.
    pub fn reflect(&self) -> HPolyhedron {
        let cs = self
            .constraints
            .iter()
            .map(|c| HalfSpace { normal: c.normal.iter().map(|v| -v).collect(), ..c.clone() })
            .collect();
        HPolyhedron { dim: self.dim, constraints: cs }
    }

    /// Preimage under `x ↦ M x` with `M` given by rows (`self.dim` rows of length `n`).
    pub fn preimage(&self, m: &[Vector]) -> Result<HPolyhedron> {
        if m.len() != self.dim {
            return Err(Error::Shape("map rows must match the polyhedron dimension".into()));
        }
        let n = m.first().map_or(0, Vec::len);
        let rows = self
            .constraints
            .iter()
            .map(|c| {
                let normal: Vector = (0..n).map(|j| (0..self.dim).map(|i| &c.normal[i] * &m[i][j]).sum()).collect();
                (normal, c.offset.clone(), c.strict)
            })
            .collect();
        Ok(HPolyhedron::from_rows(n, rows))
    }
}

/// `a ⊆ b_1 ∪ … ∪ b_k`, by exact set difference.
pub fn subset_of_union(a: &HPolyhedron, bs: &[HPolyhedron]) -> bool {
    if a.is_empty() {
        return true;
    }
    let Some((b, rest)) = bs.split_first() else { return false };
    // a ∖ b is covered by the pieces a ∩ ¬c over the constraints c of b
    b.constraints.iter().all(|c| subset_of_union(&a.with(c.negate()), rest))
}

impl fmt::Display for HPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.constraints.is_empty() {
            return write!(f, "R^{}", self.dim);
        }
        let parts: Vec<String> = self
            .constraints
            .iter()
            .map(|c| {
                let n: Vec<String> = c.normal.iter().map(|v| v.to_string()).collect();
                format!("({})·x {} {}", n.join(","), if c.strict { "<" } else { "<=" }, c.offset)
            })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

pub fn unit(dim: usize, i: usize) -> Vector {
    let mut v = vec![Rat::zero(); dim];
    v[i] = Rat::one();
    v
}

pub mod rat_str {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::foundations::{parse_rat, Rat};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

pub mod rat_vec {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::foundations::{parse_rat, Rat};

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|r| r.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| parse_rat(s).map_err(serde::de::Error::custom)).collect()
    }
}

pub mod rat_mat {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::foundations::{parse_rat, Rat};

    pub fn serialize<S: Serializer>(m: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(m.iter().map(|v| v.iter().map(|r| r.to_string()).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rat>>, D::Error> {
        let m = Vec::<Vec<String>>::deserialize(d)?;
        m.iter().map(|v| v.iter().map(|s| parse_rat(s).map_err(serde::de::Error::custom)).collect()).collect()
    }
}

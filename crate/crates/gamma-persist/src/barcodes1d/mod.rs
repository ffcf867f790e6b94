//! Intervals, barcodes and the barcode category.

mod interval;

use std::collections::BTreeMap;
use std::fmt;

pub use interval::{GammaBar, Interval};

use crate::error::{Error, Result};
use crate::foundations::{ExtRat, FieldId, Matrix, Rat};

/// Finite multiset of intervals in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Barcode {
    bars: Vec<(Interval, usize)>,
}

impl Barcode {
    pub fn empty() -> Barcode {
        Barcode::default()
    }

    /// Canonical barcode from bars with multiplicities; zero multiplicities are dropped.
    pub fn from_bars<I: IntoIterator<Item = (Interval, usize)>>(bars: I) -> Barcode {
        let mut map: BTreeMap<Interval, usize> = BTreeMap::new();
        for (i, m) in bars {
            if m > 0 {
                *map.entry(i).or_default() += m;
            }
        }
        Barcode { bars: map.into_iter().collect() }
    }

    pub fn from_intervals<I: IntoIterator<Item = Interval>>(bars: I) -> Barcode {
        Barcode::from_bars(bars.into_iter().map(|i| (i, 1)))
    }

    pub fn single(i: Interval) -> Barcode {
        Barcode { bars: vec![(i, 1)] }
    }

    pub fn bars(&self) -> &[(Interval, usize)] {
        &self.bars
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    /// Number of bars counted with multiplicity.
    pub fn total(&self) -> usize {
        self.bars.iter().map(|(_, m)| m).sum()
    }

    /// Bars repeated according to multiplicity.
    pub fn expanded(&self) -> Vec<Interval> {
        self.bars.iter().flat_map(|(i, m)| std::iter::repeat(i.clone()).take(*m)).collect()
    }

    pub fn is_gamma(&self) -> bool {
        self.bars.iter().all(|(i, _)| i.is_gamma_bar())
    }

    /// Sorted distinct finite endpoints.
    pub fn endpoints(&self) -> Vec<Rat> {
        let mut v: Vec<Rat> = self.bars.iter().flat_map(|(i, _)| i.finite_endpoints()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn map_intervals(&self, f: impl Fn(&Interval) -> Interval) -> Barcode {
        Barcode::from_bars(self.bars.iter().map(|(i, m)| (f(i), *m)))
    }
}

impl fmt::Display for Barcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .bars
            .iter()
            .map(|(i, m)| if *m == 1 { i.to_string() } else { format!("{i}x{m}") })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Multiset union.
pub fn direct_sum(a: &Barcode, b: &Barcode) -> Barcode {
    Barcode::from_bars(a.bars.iter().chain(b.bars.iter()).cloned())
}

/// Barcodes indexed by cohomological degree; `F = ⊕_j H^j(F)[-j]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct GradedBarcode {
    components: BTreeMap<i32, Barcode>,
}

impl GradedBarcode {
    pub fn zero() -> GradedBarcode {
        GradedBarcode::default()
    }

    pub fn from_components<I: IntoIterator<Item = (i32, Barcode)>>(it: I) -> GradedBarcode {
        let mut g = GradedBarcode::zero();
        for (d, b) in it {
            g.add_barcode(d, &b);
        }
        g
    }

    /// One bar `k_I` placed in degree `degree`.
    pub fn single(i: Interval, degree: i32) -> GradedBarcode {
        GradedBarcode::from_components([(degree, Barcode::single(i))])
    }

    /// Barcode concentrated in degree 0.
    pub fn in_degree_zero(b: Barcode) -> GradedBarcode {
        GradedBarcode::from_components([(0, b)])
    }

    pub fn from_triples<I: IntoIterator<Item = (i32, Interval, usize)>>(it: I) -> GradedBarcode {
        let mut g = GradedBarcode::zero();
        for (d, i, m) in it {
            g.add_barcode(d, &Barcode::from_bars([(i, m)]));
        }
        g
    }

    pub fn add_barcode(&mut self, degree: i32, b: &Barcode) {
        if b.is_empty() {
            return;
        }
        let e = self.components.entry(degree).or_default();
        *e = direct_sum(e, b);
    }

    pub fn components(&self) -> &BTreeMap<i32, Barcode> {
        &self.components
    }

    pub fn degree(&self, d: i32) -> Barcode {
        self.components.get(&d).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// `(degree, interval, multiplicity)` in canonical order.
    pub fn triples(&self) -> Vec<(i32, Interval, usize)> {
        self.components
            .iter()
            .flat_map(|(d, b)| b.bars().iter().map(move |(i, m)| (*d, i.clone(), *m)))
            .collect()
    }

    /// `(degree, interval)` repeated according to multiplicity.
    pub fn expanded(&self) -> Vec<(i32, Interval)> {
        self.triples()
            .into_iter()
            .flat_map(|(d, i, m)| std::iter::repeat((d, i)).take(m))
            .collect()
    }

    pub fn total(&self) -> usize {
        self.components.values().map(Barcode::total).sum()
    }

    /// `F[k]`: the bar in degree `j` moves to degree `j - k`.
    pub fn shift(&self, k: i32) -> GradedBarcode {
        GradedBarcode::from_components(self.components.iter().map(|(d, b)| (d - k, b.clone())))
    }

    pub fn direct_sum(&self, o: &GradedBarcode) -> GradedBarcode {
        let mut g = self.clone();
        for (d, b) in &o.components {
            g.add_barcode(*d, b);
        }
        g
    }

    pub fn is_gamma(&self) -> bool {
        self.components.values().all(Barcode::is_gamma)
    }

    pub fn endpoints(&self) -> Vec<Rat> {
        let mut v: Vec<Rat> = self.components.values().flat_map(|b| b.endpoints()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn map_intervals(&self, f: impl Fn(&Interval) -> Interval) -> GradedBarcode {
        GradedBarcode::from_components(self.components.iter().map(|(d, b)| (*d, b.map_intervals(&f))))
    }
}

impl fmt::Display for GradedBarcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.components.iter().map(|(d, b)| format!("H^{d}: {b}")).collect();
        f.write_str(&parts.join("; "))
    }
}

/// `dim Hom(k_I, k_J)`: 1 iff `I ∩ J` is non-empty, closed in `I` and open in `J`.
pub fn hom_dim(i: &Interval, j: &Interval) -> usize {
    if i.is_gamma_bar() && j.is_gamma_bar() {
        return hom_dim_gamma(i, j);
    }
    hom_dim_general(i, j)
}

pub(crate) fn hom_dim_general(i: &Interval, j: &Interval) -> usize {
    match i.intersect(j) {
        Some(k) if i.sub_closed_in(&k) && j.sub_open_in(&k) => 1,
        _ => 0,
    }
}

/// `[a,b) -> [c,d)` is non-zero iff `a <= c < b <= d`.
fn hom_dim_gamma(i: &Interval, j: &Interval) -> usize {
    let (a, b, c, d) = (i.lower(), i.upper(), j.lower(), j.upper());
    usize::from(a <= c && c < b && b <= d)
}

/// Which stalk of `Ψ(b)` to measure at `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    At,
    LeftLimit,
    RightLimit,
}

/// Number of bars (with multiplicity) whose interval meets the requested stalk.
pub fn psi_stalk_rank(b: &Barcode, x: &Rat, side: Side) -> usize {
    let xe = ExtRat::Finite(x.clone());
    b.bars()
        .iter()
        .filter(|(i, _)| match side {
            Side::At => i.contains(x),
            Side::LeftLimit => *i.lower() < xe && xe <= *i.upper(),
            Side::RightLimit => *i.lower() <= xe && xe < *i.upper(),
        })
        .map(|(_, m)| m)
        .sum()
}

/// Morphism in the barcode category: one block per pair of distinct bars,
/// sized `mult(target) x mult(source)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarcodeMorphism {
    field: FieldId,
    source: Barcode,
    target: Barcode,
    entries: BTreeMap<(usize, usize), Matrix>,
}

impl BarcodeMorphism {
    /// Validates block shapes and the vanishing rule; zero blocks are dropped.
    pub fn new(
        field: FieldId,
        source: Barcode,
        target: Barcode,
        entries: BTreeMap<(usize, usize), Matrix>,
    ) -> Result<BarcodeMorphism> {
        let mut kept = BTreeMap::new();
        for ((s, t), m) in entries {
            let (Some((si, sm)), Some((ti, tm))) = (source.bars().get(s), target.bars().get(t)) else {
                return Err(Error::Shape(format!("block ({s},{t}) out of range")));
            };
            if m.field() != field {
                return Err(Error::FieldMismatch);
            }
            if (m.rows(), m.cols()) != (*tm, *sm) {
                return Err(Error::Shape(format!("block ({s},{t}) must be {tm}x{sm}")));
            }
            if m.is_zero() {
                continue;
            }
            if hom_dim(si, ti) == 0 {
                return Err(Error::Invalid(format!("Hom({si}, {ti}) vanishes but block ({s},{t}) is non-zero")));
            }
            kept.insert((s, t), m);
        }
        Ok(BarcodeMorphism { field, source, target, entries: kept })
    }

    pub fn identity(field: FieldId, b: &Barcode) -> BarcodeMorphism {
        let entries = b.bars().iter().enumerate().map(|(k, (_, m))| ((k, k), Matrix::identity(field, *m))).collect();
        BarcodeMorphism { field, source: b.clone(), target: b.clone(), entries }
    }

    pub fn zero(field: FieldId, source: &Barcode, target: &Barcode) -> BarcodeMorphism {
        BarcodeMorphism { field, source: source.clone(), target: target.clone(), entries: BTreeMap::new() }
    }

    pub fn field(&self) -> FieldId {
        self.field
    }

    pub fn source(&self) -> &Barcode {
        &self.source
    }

    pub fn target(&self) -> &Barcode {
        &self.target
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), Matrix> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `v ∘ u` for `u: A -> B`, `v: B -> C`; entries land only where Hom in `Barc` is non-zero.
pub fn compose(u: &BarcodeMorphism, v: &BarcodeMorphism) -> Result<BarcodeMorphism> {
    if u.target != v.source {
        return Err(Error::Shape("compose needs u.target == v.source".into()));
    }
    if u.field != v.field {
        return Err(Error::FieldMismatch);
    }
    let mut out: BTreeMap<(usize, usize), Matrix> = BTreeMap::new();
    for (&(a, b), mu) in &u.entries {
        for (&(b2, c), mv) in v.entries.range((b, 0)..(b + 1, 0)) {
            debug_assert_eq!(b, b2);
            if hom_dim(&u.source.bars()[a].0, &v.target.bars()[c].0) == 0 {
                continue;
            }
            let prod = mv.mul(mu)?;
            let slot = out.entry((a, c));
            match slot {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(prod);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let s = e.get().add(&prod)?;
                    e.insert(s);
                }
            }
        }
    }
    BarcodeMorphism::new(u.field, u.source.clone(), v.target.clone(), out)
}

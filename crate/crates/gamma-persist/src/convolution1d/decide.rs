use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use super::algebra::{Bar, ChainAlgebra};
use super::Kernel;
use crate::barcodes1d::{GradedBarcode, Interval};
use crate::error::{Error, Result};
use crate::foundations::{ExtRat, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecideOptions {
    /// Largest total bar count decided by exhaustive search.
    pub exact_bound: usize,
    /// Decide pairs of γ-barcodes by bar matching.
    pub gamma_fast_path: bool,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions { exact_bound: 8, gamma_fast_path: true }
    }
}

/// Outcome of the a-isomorphism test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AIso {
    Yes(Option<InterleavingWitness>),
    No,
    Indeterminate,
}

impl AIso {
    pub fn decided(&self) -> Option<bool> {
        match self {
            AIso::Yes(_) => Some(true),
            AIso::No => Some(false),
            AIso::Indeterminate => None,
        }
    }
}

/// One non-zero component of a morphism between direct sums of shifted intervals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub source: usize,
    pub target: usize,
    /// 0 for a Hom component, 1 for an Ext¹ component.
    pub ext_degree: i32,
}

/// Morphisms `f: K_a⋆F → G` and `g: K_a⋆G → F` whose composites are the canonical maps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InterleavingWitness {
    pub a: String,
    pub f_bars: Vec<(String, i32)>,
    pub g_bars: Vec<(String, i32)>,
    pub f: Vec<Component>,
    pub g: Vec<Component>,
}

impl InterleavingWitness {
    /// Checks the witness against the two composition identities.
    pub fn verify(&self, f: &GradedBarcode, g: &GradedBarcode) -> Result<bool> {
        let a: Rat = crate::foundations::parse_rat(&self.a)?;
        let p = Problem::new(f, g, &a);
        let fb = p.f_mask(&self.f).ok_or_else(|| Error::Invalid("component outside Hom space".into()))?;
        let gb = p.g_mask(&self.g).ok_or_else(|| Error::Invalid("component outside Hom space".into()))?;
        Ok(p.check(fb, gb))
    }
}

struct Problem {
    a: Rat,
    fb: Vec<Bar>,
    gb: Vec<Bar>,
    f_slots: Vec<(usize, usize, i32)>,
    g_slots: Vec<(usize, usize, i32)>,
    /// Constraint rows: right-hand side and `(f slot, g slot)` products appearing in it.
    rows: Vec<(bool, Vec<(usize, usize)>)>,
}

impl Problem {
    fn new(f: &GradedBarcode, g: &GradedBarcode, a: &Rat) -> Problem {
        let fb: Vec<Bar> = f.expanded().into_iter().map(|(d, i)| (i, d)).collect();
        let gb: Vec<Bar> = g.expanded().into_iter().map(|(d, i)| (i, d)).collect();
        let (k1, k2) = (Kernel::new(a.clone()), Kernel::new(a * Rat::from_integer(2.into())));
        let sh = |k: &Kernel, v: &[Bar]| v.iter().map(|(i, d)| k.apply_bar(i, *d)).collect::<Vec<Bar>>();
        let (kf1, kf2, kg1, kg2) = (sh(&k1, &fb), sh(&k2, &fb), sh(&k1, &gb), sh(&k2, &gb));
        let mut alg = ChainAlgebra::new(
            [&fb, &gb, &kf1, &kf2, &kg1, &kg2].into_iter().flat_map(|v| v.iter().map(|b| &b.0)),
        );
        let mut f_slots = Vec::new();
        for (x, bx) in kf1.iter().enumerate() {
            for (y, by) in gb.iter().enumerate() {
                if alg.space(bx, by) {
                    debug_assert!(alg.space(&kf2[x], &kg1[y]));
                    f_slots.push((x, y, bx.1 - by.1));
                }
            }
        }
        let mut g_slots = Vec::new();
        for (y, by) in kg1.iter().enumerate() {
            for (x, bx) in fb.iter().enumerate() {
                if alg.space(by, bx) {
                    debug_assert!(alg.space(&kg2[y], &kf1[x]));
                    g_slots.push((y, x, by.1 - bx.1));
                }
            }
        }
        let mut rows = Vec::new();
        // g ∘ (K_a f) = χ ⋆ F
        for x1 in 0..fb.len() {
            for x2 in 0..fb.len() {
                if !alg.space(&kf2[x1], &fb[x2]) {
                    continue;
                }
                let mut terms = Vec::new();
                for (si, &(fx, fy, _)) in f_slots.iter().enumerate().filter(|s| s.1 .0 == x1) {
                    for (ti, _) in g_slots.iter().enumerate().filter(|t| t.1 .0 == fy && t.1 .1 == x2) {
                        if alg.product(&kf2[fx], &kg1[fy], &fb[x2]) {
                            terms.push((si, ti));
                        }
                    }
                }
                rows.push((x1 == x2, terms));
            }
        }
        // f ∘ (K_a g) = χ ⋆ G
        for y1 in 0..gb.len() {
            for y2 in 0..gb.len() {
                if !alg.space(&kg2[y1], &gb[y2]) {
                    continue;
                }
                let mut terms = Vec::new();
                for (ti, &(_, gx, _)) in g_slots.iter().enumerate().filter(|t| t.1 .0 == y1) {
                    for (si, _) in f_slots.iter().enumerate().filter(|s| s.1 .0 == gx && s.1 .1 == y2) {
                        if alg.product(&kg2[y1], &kf1[gx], &gb[y2]) {
                            terms.push((si, ti));
                        }
                    }
                }
                rows.push((y1 == y2, terms));
            }
        }
        Problem { a: a.clone(), fb, gb, f_slots, g_slots, rows }
    }

    /// Solves for `g` given `f`, over F₂ with bitmasks.
    fn solve_g(&self, f: u64) -> Option<u64> {
        let ng = self.g_slots.len();
        let mut eqs: Vec<(u64, bool)> = self
            .rows
            .iter()
            .map(|(rhs, terms)| {
                let mask = terms.iter().filter(|(s, _)| f >> s & 1 == 1).fold(0u64, |m, (_, t)| m ^ (1 << t));
                (mask, *rhs)
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ng {
            let Some(p) = (r..eqs.len()).find(|&i| eqs[i].0 >> c & 1 == 1) else { continue };
            eqs.swap(r, p);
            let (pm, pr) = eqs[r];
            for (i, e) in eqs.iter_mut().enumerate() {
                if i != r && e.0 >> c & 1 == 1 {
                    e.0 ^= pm;
                    e.1 ^= pr;
                }
            }
            pivots.push(c);
            r += 1;
        }
        if eqs[r..].iter().any(|e| e.1) {
            return None;
        }
        Some(pivots.iter().enumerate().filter(|(i, _)| eqs[*i].1).fold(0u64, |m, (_, c)| m | (1 << c)))
    }

    fn check(&self, f: u64, g: u64) -> bool {
        self.rows.iter().all(|(rhs, terms)| {
            let v = terms.iter().filter(|(s, t)| f >> s & 1 == 1 && g >> t & 1 == 1).count() % 2 == 1;
            v == *rhs
        })
    }

    fn f_mask(&self, comps: &[Component]) -> Option<u64> {
        comps.iter().try_fold(0u64, |m, c| {
            let i = self.f_slots.iter().position(|s| s.0 == c.source && s.1 == c.target && s.2 == c.ext_degree)?;
            Some(m | 1 << i)
        })
    }

    fn g_mask(&self, comps: &[Component]) -> Option<u64> {
        comps.iter().try_fold(0u64, |m, c| {
            let i = self.g_slots.iter().position(|s| s.0 == c.source && s.1 == c.target && s.2 == c.ext_degree)?;
            Some(m | 1 << i)
        })
    }

    fn witness(&self, f: u64, g: u64) -> InterleavingWitness {
        let comps = |slots: &[(usize, usize, i32)], m: u64| {
            slots
                .iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, s)| Component { source: s.0, target: s.1, ext_degree: s.2 })
                .collect()
        };
        let names = |v: &[Bar]| v.iter().map(|(i, d)| (i.to_string(), *d)).collect();
        InterleavingWitness {
            a: self.a.to_string(),
            f_bars: names(&self.fb),
            g_bars: names(&self.gb),
            f: comps(&self.f_slots, f),
            g: comps(&self.g_slots, g),
        }
    }
}

const MAX_F_SLOTS: usize = 24;

fn decide_exact(f: &GradedBarcode, g: &GradedBarcode, a: &Rat) -> AIso {
    let p = Problem::new(f, g, a);
    if p.f_slots.len() > MAX_F_SLOTS || p.g_slots.len() > 64 {
        return AIso::Indeterminate;
    }
    let found = (0..1u64 << p.f_slots.len()).into_par_iter().find_map_first(|fm| p.solve_g(fm).map(|gm| (fm, gm)));
    match found {
        Some((fm, gm)) => {
            debug_assert!(p.check(fm, gm));
            AIso::Yes(Some(p.witness(fm, gm)))
        }
        None => AIso::No,
    }
}

fn ext_dist(x: &ExtRat, y: &ExtRat) -> ExtRat {
    match (x, y) {
        (ExtRat::Finite(a), ExtRat::Finite(b)) => ExtRat::Finite((a - b).abs()),
        _ if x == y => ExtRat::Finite(Rat::from_integer(0.into())),
        _ => ExtRat::PosInf,
    }
}

/// Bar matching for barcodes made of `[x,y)` bars in each degree.
fn decide_gamma(f: &GradedBarcode, g: &GradedBarcode, a: &Rat) -> bool {
    let a_ext = ExtRat::Finite(a.clone());
    let two_a = ExtRat::Finite(a * Rat::from_integer(2.into()));
    let degrees: std::collections::BTreeSet<i32> =
        f.components().keys().chain(g.components().keys()).copied().collect();
    degrees.into_iter().all(|d| {
        let fs = f.degree(d).expanded();
        let gs = g.degree(d).expanded();
        let short = |i: &Interval| i.upper().sub(i.lower()).map(|l| l <= two_a).unwrap_or(false);
        let close = |i: &Interval, j: &Interval| {
            ext_dist(i.lower(), j.lower()) <= a_ext && ext_dist(i.upper(), j.upper()) <= a_ext
        };
        let (n, m) = (fs.len(), gs.len());
        // left: F bars then G diagonals; right: G bars then F diagonals
        let adj: Vec<Vec<usize>> = (0..n + m)
            .map(|l| {
                if l < n {
                    let mut v: Vec<usize> = (0..m).filter(|&j| close(&fs[l], &gs[j])).collect();
                    if short(&fs[l]) {
                        v.push(m + l);
                    }
                    v
                } else {
                    let j = l - n;
                    let mut v: Vec<usize> = if short(&gs[j]) { vec![j] } else { vec![] };
                    v.extend(m..m + n);
                    v
                }
            })
            .collect();
        perfect_matching(&adj, n + m)
    })
}

fn perfect_matching(adj: &[Vec<usize>], nright: usize) -> bool {
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], mate: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if mate[v].is_none() || augment(mate[v].unwrap(), adj, seen, mate) {
                mate[v] = Some(u);
                return true;
            }
        }
        false
    }
    let mut mate = vec![None; nright];
    (0..adj.len()).all(|u| augment(u, adj, &mut vec![false; nright], &mut mate))
}

/// Decides whether `f` and `g` are a-isomorphic.
pub fn is_a_isomorphic(f: &GradedBarcode, g: &GradedBarcode, a: &Rat, opts: &DecideOptions) -> Result<AIso> {
    if *a < Rat::from_integer(0.into()) {
        return Err(Error::Invalid("a must be non-negative".into()));
    }
    if opts.gamma_fast_path && f.is_gamma() && g.is_gamma() {
        return Ok(if decide_gamma(f, g, a) { AIso::Yes(None) } else { AIso::No });
    }
    if f.total() + g.total() <= opts.exact_bound {
        return Ok(decide_exact(f, g, a));
    }
    Ok(AIso::Indeterminate)
}

/// Certified bounds on the convolution distance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceBounds {
    pub lower: ExtRat,
    pub upper: ExtRat,
    pub exact: bool,
}

fn candidates(f: &GradedBarcode, g: &GradedBarcode) -> Vec<Rat> {
    let mut e = f.endpoints();
    e.extend(g.endpoints());
    let two = Rat::from_integer(2.into());
    let mut c = vec![Rat::from_integer(0.into())];
    for x in &e {
        for y in &e {
            if x < y {
                c.push(y - x);
                c.push((y - x) / &two);
            }
        }
    }
    c.sort();
    c.dedup();
    c
}

pub fn distance_bounds(f: &GradedBarcode, g: &GradedBarcode, opts: &DecideOptions) -> Result<DistanceBounds> {
    let c = candidates(f, g);
    let fin = |r: &Rat| ExtRat::Finite(r.clone());
    let unknown = |lo: ExtRat| DistanceBounds { lower: lo, upper: ExtRat::PosInf, exact: false };
    let test = |r: &Rat| is_a_isomorphic(f, g, r, opts).map(|x| x.decided());
    let last = c.last().expect("zero is a candidate").clone();
    match test(&last)? {
        None => return Ok(unknown(fin(&c[0]))),
        Some(false) => {
            let probe = &last * Rat::from_integer(2.into()) + Rat::from_integer(1.into());
            return Ok(match test(&probe)? {
                Some(true) => DistanceBounds { lower: fin(&last), upper: fin(&probe), exact: false },
                Some(false) => unknown(fin(&probe)),
                None => unknown(fin(&last)),
            });
        }
        Some(true) => {}
    }
    if test(&c[0])? == Some(true) {
        return Ok(DistanceBounds { lower: fin(&c[0]), upper: fin(&c[0]), exact: true });
    }
    // invariant: c[lo] fails, c[hi] succeeds
    let (mut lo, mut hi) = (0, c.len() - 1);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        match test(&c[mid])? {
            Some(true) => hi = mid,
            Some(false) => lo = mid,
            None => return Ok(DistanceBounds { lower: fin(&c[lo]), upper: fin(&c[hi]), exact: false }),
        }
    }
    let midpoint = (&c[lo] + &c[hi]) / Rat::from_integer(2.into());
    Ok(match test(&midpoint)? {
        Some(false) => DistanceBounds { lower: fin(&c[hi]), upper: fin(&c[hi]), exact: true },
        _ => DistanceBounds { lower: fin(&c[lo]), upper: fin(&c[hi]), exact: false },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convolution1d::convolve;
    use crate::foundations::{rat, rat_int};
    use proptest::prelude::*;

    fn g1(s: &str, d: i32) -> GradedBarcode {
        GradedBarcode::single(s.parse().unwrap(), d)
    }

    fn exact() -> DecideOptions {
        DecideOptions { exact_bound: 8, gamma_fast_path: false }
    }

    fn yes(f: &GradedBarcode, g: &GradedBarcode, a: Rat) -> bool {
        is_a_isomorphic(f, g, &a, &exact()).unwrap().decided().unwrap()
    }

    #[test]
    fn anchors() {
        let k = |a: i64| Kernel::new(rat_int(a)).barcode();
        assert!(yes(&k(-1), &k(0), rat_int(1)));
        assert!(!yes(&k(-1), &k(0), rat(1, 2)));
        let b = g1("[0,2)", 0);
        let z = GradedBarcode::zero();
        assert!(yes(&b, &z, rat_int(1)));
        assert!(!yes(&b, &z, rat(9, 10)));
        assert!(yes(&b, &b, rat_int(0)));
        assert!(yes(&k(1), &k(0), rat_int(1)));
    }

    #[test]
    fn witness_verifies() {
        let f = Kernel::new(rat_int(-1)).barcode();
        let g = Kernel::new(rat_int(0)).barcode();
        let AIso::Yes(Some(w)) = is_a_isomorphic(&f, &g, &rat_int(1), &exact()).unwrap() else { panic!() };
        assert!(w.verify(&f, &g).unwrap());
        assert!(w.g.iter().any(|c| c.ext_degree == 1));
        let mut bad = w.clone();
        bad.f.clear();
        assert!(!bad.verify(&f, &g).unwrap());
    }

    #[test]
    fn distance_examples() {
        let d = distance_bounds(&g1("[0,2]", 0), &g1("[0,3]", 0), &DecideOptions::default()).unwrap();
        assert_eq!(d, DistanceBounds { lower: ExtRat::Finite(rat_int(1)), upper: ExtRat::Finite(rat_int(1)), exact: true });
        let d = distance_bounds(&g1("[-1,1]", 0), &g1("{0}", 0), &DecideOptions::default()).unwrap();
        assert!(d.upper <= ExtRat::Finite(rat_int(1)));
        let f = GradedBarcode::from_triples([(0, "(0,1)".parse().unwrap(), 1), (1, "{3}".parse().unwrap(), 1)]);
        let d = distance_bounds(&f, &f, &DecideOptions::default()).unwrap();
        assert_eq!(d.upper, ExtRat::Finite(rat_int(0)));
        let d = distance_bounds(&g1("[0,+inf)", 0), &g1("(-inf,0)", 0), &DecideOptions::default()).unwrap();
        assert_eq!(d.upper, ExtRat::PosInf);
    }

    fn arb_gamma_bar() -> impl Strategy<Value = Interval> {
        (-4i64..4, 1i64..5, any::<bool>()).prop_map(|(a, l, inf)| {
            let hi = if inf { ExtRat::PosInf } else { ExtRat::Finite(rat(a + l, 2)) };
            Interval::new(ExtRat::Finite(rat(a, 2)), hi, true, false).unwrap()
        })
    }

    fn arb_gamma(n: usize) -> impl Strategy<Value = GradedBarcode> {
        prop::collection::vec((0i32..2, arb_gamma_bar()), 0..n)
            .prop_map(|v| GradedBarcode::from_triples(v.into_iter().map(|(d, i)| (d, i, 1))))
    }

    fn arb_bounded_bar() -> impl Strategy<Value = Interval> {
        (-3i64..3, 0i64..4, any::<bool>(), any::<bool>()).prop_map(|(a, l, lc, uc)| {
            if l == 0 {
                Interval::singleton(&rat(a, 2))
            } else {
                Interval::new(ExtRat::Finite(rat(a, 2)), ExtRat::Finite(rat(a + l, 2)), lc, uc).unwrap()
            }
        })
    }

    fn arb_small(n: usize) -> impl Strategy<Value = GradedBarcode> {
        prop::collection::vec((-1i32..1, arb_bounded_bar()), 0..n)
            .prop_map(|v| GradedBarcode::from_triples(v.into_iter().map(|(d, i)| (d, i, 1))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn gamma_matching_agrees_with_exact(f in arb_gamma(3), g in arb_gamma(3), a in 0i64..5) {
            let a = rat(a, 4);
            let fast = is_a_isomorphic(&f, &g, &a, &DecideOptions::default()).unwrap().decided();
            let slow = is_a_isomorphic(&f, &g, &a, &exact()).unwrap().decided();
            prop_assert_eq!(fast, slow);
        }

        #[test]
        fn monotone_in_a(f in arb_small(3), g in arb_small(2), a in 0i64..4) {
            if yes(&f, &g, rat(a, 2)) {
                prop_assert!(yes(&f, &g, rat(a + 1, 2)));
            }
        }

        #[test]
        fn symmetric(f in arb_small(3), g in arb_small(2), a in 0i64..4) {
            prop_assert_eq!(yes(&f, &g, rat(a, 2)), yes(&g, &f, rat(a, 2)));
        }

        #[test]
        fn zero_iso_means_equal(f in arb_small(3), g in arb_small(2)) {
            prop_assert_eq!(yes(&f, &g, rat_int(0)), f == g);
        }

        #[test]
        fn kernel_shift_bounded(f in arb_small(3), a in -3i64..3) {
            let a = rat(a, 2);
            let kf = Kernel::new(a.clone()).apply(&f);
            let abs = if a < rat_int(0) { -a } else { a };
            prop_assert!(yes(&kf, &f, abs));
        }

        #[test]
        fn convolution_subadditive(f in arb_small(2), g in arb_small(2)) {
            let h = g1("[0,1]", 0);
            let d = distance_bounds(&f, &g, &exact()).unwrap();
            if let ExtRat::Finite(u) = d.upper {
                let (fh, gh) = (convolve(&f, &h).unwrap(), convolve(&g, &h).unwrap());
                let r = is_a_isomorphic(&fh, &gh, &u, &exact()).unwrap().decided();
                prop_assert!(r != Some(false));
            }
        }
    }
}

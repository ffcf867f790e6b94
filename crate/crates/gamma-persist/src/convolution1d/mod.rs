//! Convolution of sheaves on the line, the kernels `K_a`, and interleavings.

mod algebra;
mod decide;

use crate::barcodes1d::{GradedBarcode, Interval};
use crate::cellular1d::CriticalGrid;
use crate::error::{Error, Result};
use crate::foundations::{ExtRat, Rat};

pub use algebra::{chi, ChiMorphism};
pub use decide::{distance_bounds, is_a_isomorphic, AIso, DecideOptions, DistanceBounds, InterleavingWitness};

/// `K_a`: `k_[-a,a]` for `a >= 0`, `k_(a,-a)[1]` for `a < 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Kernel {
    pub a: Rat,
}

impl Kernel {
    pub fn new(a: Rat) -> Kernel {
        Kernel { a }
    }

    pub fn bar(&self) -> (Interval, i32) {
        let z = Rat::from_integer(0.into());
        if self.a >= z {
            (Interval::closed(&-self.a.clone(), &self.a).expect("a >= 0"), 0)
        } else {
            (Interval::open(&self.a, &-self.a.clone()).expect("a < 0"), -1)
        }
    }

    pub fn barcode(&self) -> GradedBarcode {
        let (i, d) = self.bar();
        GradedBarcode::single(i, d)
    }

    /// `K_a ⋆ k_I`, which is always a single shifted bar.
    pub fn apply_bar(&self, i: &Interval, degree: i32) -> (Interval, i32) {
        let (k, kd) = self.bar();
        let out = convolve_bars(&k, i).expect("kernels are compact");
        debug_assert_eq!(out.len(), 1, "K_a acts by an equivalence");
        let (j, d) = out.into_iter().next().expect("nonzero");
        (j, degree + kd + d)
    }

    pub fn apply(&self, f: &GradedBarcode) -> GradedBarcode {
        GradedBarcode::from_triples(f.triples().into_iter().map(|(d, i, m)| {
            let (j, e) = self.apply_bar(&i, d);
            (e, j, m)
        }))
    }
}

fn proper_pair(i: &Interval, j: &Interval) -> bool {
    let below = |x: &Interval| x.lower().is_finite();
    let above = |x: &Interval| x.upper().is_finite();
    i.is_bounded() || j.is_bounded() || (below(i) && below(j)) || (above(i) && above(j))
}

fn max_end(a: (&ExtRat, bool), b: (ExtRat, bool)) -> (ExtRat, bool) {
    match a.0.cmp(&b.0) {
        std::cmp::Ordering::Greater => (a.0.clone(), a.1),
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => (b.0, a.1 && b.1),
    }
}

fn min_end(a: (&ExtRat, bool), b: (ExtRat, bool)) -> (ExtRat, bool) {
    match a.0.cmp(&b.0) {
        std::cmp::Ordering::Less => (a.0.clone(), a.1),
        std::cmp::Ordering::Greater => b,
        std::cmp::Ordering::Equal => (b.0, a.1 && b.1),
    }
}

/// Degree of `RΓ_c` of the fiber `I ∩ (t - J)`, if non-zero.
fn fiber_degree(i: &Interval, j: &Interval, t: &Rat) -> Option<i32> {
    let t = ExtRat::Finite(t.clone());
    let (lo, lc) = max_end((i.lower(), i.lower_closed()), (t.sub(j.upper()).expect("finite t"), j.upper_closed()));
    let (hi, hc) = min_end((i.upper(), i.upper_closed()), (t.sub(j.lower()).expect("finite t"), j.lower_closed()));
    if lo > hi || (lo == hi && !(lc && hc)) {
        return None;
    }
    match (lc, hc) {
        (true, true) => Some(0),
        (false, false) => Some(1),
        _ => None,
    }
}

/// `k_I ⋆ k_J` as bars with a degree offset, by taking compactly supported
/// cohomology of the fibers of addition.
pub fn convolve_bars(i: &Interval, j: &Interval) -> Result<Vec<(Interval, i32)>> {
    if !proper_pair(i, j) {
        return Err(Error::NonProperConvolution);
    }
    let mut crit = Vec::new();
    for x in [i.lower(), i.upper()] {
        for y in [j.lower(), j.upper()] {
            if let (Some(a), Some(b)) = (x.as_finite(), y.as_finite()) {
                crit.push(a + b);
            }
        }
    }
    let grid = CriticalGrid::from_unsorted(crit);
    let mut out = Vec::new();
    for deg in 0..2 {
        let cells: Vec<usize> =
            (0..grid.num_cells()).filter(|&c| fiber_degree(i, j, &grid.sample(c)) == Some(deg)).collect();
        if let (Some(&s), Some(&e)) = (cells.first(), cells.last()) {
            debug_assert_eq!(e - s + 1, cells.len(), "fiber regions are convex");
            out.push((grid.span(s, e), deg));
        }
    }
    Ok(out)
}

/// `F ⋆ G`, bilinear over bars with degrees adding.
pub fn convolve(f: &GradedBarcode, g: &GradedBarcode) -> Result<GradedBarcode> {
    let mut triples = Vec::new();
    for (di, i, m) in f.triples() {
        for (dj, j, n) in g.triples() {
            for (k, e) in convolve_bars(&i, &j)? {
                triples.push((di + dj + e, k, m * n));
            }
        }
    }
    Ok(GradedBarcode::from_triples(triples))
}

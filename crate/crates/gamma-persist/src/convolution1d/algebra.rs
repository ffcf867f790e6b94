use std::collections::HashMap;

use super::Kernel;
use crate::barcodes1d::{GradedBarcode, Interval};
use crate::cellular1d::ops::HomComplex;
use crate::cellular1d::{barcode_on_grid, CriticalGrid, ZigzagModule};
use crate::barcodes1d::Barcode;
use crate::cellular1d::elim::Cokernel;
use crate::error::{Error, Result};
use crate::foundations::{FieldId, Rat};

/// A shifted interval `k_I[-degree]`.
pub type Bar = (Interval, i32);

struct PairData {
    cx: HomComplex,
    ck: Cokernel,
    hom_gen: Option<Vec<bool>>,
    ext_gen: Option<Vec<bool>>,
}

/// Hom and Ext¹ generators between interval sheaves over F₂, with Yoneda
/// products evaluated on cochains over one shared grid.
pub(crate) struct ChainAlgebra {
    modules: HashMap<Interval, ZigzagModule>,
    grid: CriticalGrid,
    pairs: HashMap<(Interval, Interval), PairData>,
}

impl ChainAlgebra {
    pub fn new<'a, I: IntoIterator<Item = &'a Interval>>(bars: I) -> ChainAlgebra {
        let bars: Vec<&Interval> = bars.into_iter().collect();
        let grid = CriticalGrid::from_unsorted(bars.iter().flat_map(|b| b.finite_endpoints()));
        let modules = bars
            .iter()
            .map(|b| {
                let m = barcode_on_grid(FieldId::F2, &Barcode::single((*b).clone()), &grid).expect("grid");
                ((*b).clone(), m)
            })
            .collect();
        ChainAlgebra { modules, grid, pairs: HashMap::new() }
    }

    fn pair(&mut self, x: &Interval, y: &Interval) -> &PairData {
        let key = (x.clone(), y.clone());
        if !self.pairs.contains_key(&key) {
            let cx = HomComplex::new(&self.modules[x], &self.modules[y]).expect("same field");
            let ncells = self.grid.num_cells();
            let ker = cx.delta.nullspace();
            assert!(ker.cols() <= 1, "Hom between intervals has dimension at most one");
            let hom_gen = (ker.cols() == 1).then(|| {
                (0..ncells)
                    .map(|v| cx.dim0(v) == 1 && !ker.get(cx.v_off[v], 0).is_zero())
                    .collect()
            });
            let ck = Cokernel::new(&cx.delta);
            assert!(ck.dim() <= 1, "Ext¹ between intervals has dimension at most one");
            let ext_gen = (ck.dim() == 1).then(|| {
                let idx = ck.complement[0];
                (0..cx.arrows.len()).map(|a| cx.dim1(a) == 1 && cx.a_off[a] == idx).collect()
            });
            self.pairs.insert(key.clone(), PairData { cx, ck, hom_gen, ext_gen });
        }
        &self.pairs[&key]
    }

    /// Dimension of `Ext^e(k_x, k_y)` for `e ∈ {0,1}`, zero otherwise.
    pub fn dim(&mut self, x: &Interval, y: &Interval, e: i32) -> usize {
        let p = self.pair(x, y);
        match e {
            0 => p.hom_gen.is_some() as usize,
            1 => p.ext_gen.is_some() as usize,
            _ => 0,
        }
    }

    /// Whether the morphism space between the shifted bars is non-zero.
    pub fn space(&mut self, x: &Bar, y: &Bar) -> bool {
        self.dim(&x.0, &y.0, x.1 - y.1) == 1
    }

    fn ext_class_nonzero(&mut self, x: &Interval, z: &Interval, w: &[bool]) -> bool {
        let p = self.pair(x, z);
        let f = FieldId::F2;
        let mut v = vec![f.zero(); p.cx.delta.rows()];
        for (a, &b) in w.iter().enumerate() {
            if b {
                debug_assert_eq!(p.cx.dim1(a), 1);
                v[p.cx.a_off[a]] = f.one();
            }
        }
        p.ck.coords(&v).iter().any(|c| !c.is_zero())
    }

    /// Composite of the generators `x → y → z` is the generator of the target space (true) or zero.
    pub fn product(&mut self, x: &Bar, y: &Bar, z: &Bar) -> bool {
        let (e1, e2) = (x.1 - y.1, y.1 - z.1);
        if !(self.space(x, y) && self.space(y, z) && self.space(x, z)) {
            return false;
        }
        let arrows = self.pair(&x.0, &y.0).cx.arrows.clone();
        match (e1, e2) {
            (0, 0) => {
                let h = self.pair(&x.0, &y.0).hom_gen.clone().expect("hom");
                let k = self.pair(&y.0, &z.0).hom_gen.clone().expect("hom");
                h.iter().zip(&k).any(|(a, b)| *a && *b)
            }
            (1, 0) => {
                let psi = self.pair(&x.0, &y.0).ext_gen.clone().expect("ext");
                let k = self.pair(&y.0, &z.0).hom_gen.clone().expect("hom");
                let w: Vec<bool> = arrows.iter().enumerate().map(|(a, &(_, t))| psi[a] && k[t]).collect();
                self.ext_class_nonzero(&x.0, &z.0, &w)
            }
            (0, 1) => {
                let h = self.pair(&x.0, &y.0).hom_gen.clone().expect("hom");
                let psi = self.pair(&y.0, &z.0).ext_gen.clone().expect("ext");
                let w: Vec<bool> = arrows.iter().enumerate().map(|(a, &(s, _))| psi[a] && h[s]).collect();
                self.ext_class_nonzero(&x.0, &z.0, &w)
            }
            _ => false,
        }
    }
}

/// The diagonal morphism `χ_{b,a} ⋆ F : K_a ⋆ F → K_b ⋆ F`, one component per bar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiMorphism {
    pub source: GradedBarcode,
    pub target: GradedBarcode,
    /// `(source bar, target bar, component is the canonical generator)`
    pub components: Vec<(Bar, Bar, bool)>,
}

pub(crate) fn chi_component(alg: &mut ChainAlgebra, src: &Bar, tgt: &Bar) -> bool {
    alg.space(src, tgt)
}

pub fn chi(b: &Rat, a: &Rat, f: &GradedBarcode) -> Result<ChiMorphism> {
    if a < b {
        return Err(Error::Invalid("chi needs a >= b".into()));
    }
    let (ka, kb) = (Kernel::new(a.clone()), Kernel::new(b.clone()));
    let pairs: Vec<(Bar, Bar)> = f
        .expanded()
        .into_iter()
        .map(|(d, i)| (ka.apply_bar(&i, d), kb.apply_bar(&i, d)))
        .collect();
    let mut alg = ChainAlgebra::new(pairs.iter().flat_map(|(s, t)| [&s.0, &t.0]));
    let components = pairs
        .into_iter()
        .map(|(s, t)| {
            let nz = chi_component(&mut alg, &s, &t);
            (s, t, nz)
        })
        .collect();
    Ok(ChiMorphism { source: ka.apply(f), target: kb.apply(f), components })
}

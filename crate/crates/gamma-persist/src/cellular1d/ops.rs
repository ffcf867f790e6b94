use std::collections::BTreeMap;

use super::bar::bar_ext_dims;
use super::elim::{coords_in, unit, Cokernel, Vector};
use super::zigzag::{arrows_of, barcode_on_grid, decompose, grid_of, ZigzagModule};
use crate::barcodes1d::{Barcode, GradedBarcode, Interval};
use crate::error::{Error, Result};
use crate::foundations::{FieldId, Matrix};

/// The two-term complex `⊕_v Hom(M_v,N_v) → ⊕_{s→t} Hom(M_s,N_t)` whose
/// cohomology is `Hom` and `Ext¹` between two representations on one grid.
pub(crate) struct HomComplex {
    pub m: ZigzagModule,
    pub n: ZigzagModule,
    pub delta: Matrix,
    pub v_off: Vec<usize>,
    pub a_off: Vec<usize>,
    pub arrows: Vec<(usize, usize)>,
}

impl HomComplex {
    pub fn new(m: &ZigzagModule, n: &ZigzagModule) -> Result<HomComplex> {
        if m.field() != n.field() {
            return Err(Error::FieldMismatch);
        }
        let g = m.grid().merge(n.grid());
        let (m, n) = (m.refine(&g)?, n.refine(&g)?);
        let (d, e) = (m.dims(), n.dims());
        let mut v_off = Vec::with_capacity(d.len());
        let mut c0 = 0;
        for v in 0..d.len() {
            v_off.push(c0);
            c0 += d[v] * e[v];
        }
        let arrows = arrows_of(g.num_points());
        let mut a_off = Vec::with_capacity(arrows.len());
        let mut c1 = 0;
        for &(s, t) in &arrows {
            a_off.push(c1);
            c1 += e[t] * d[s];
        }
        let field = m.field();
        let mut delta = Matrix::zeros(field, c1, c0);
        for (a, &(s, t)) in arrows.iter().enumerate() {
            let (ma, na) = (m.arrow(s, t), n.arrow(s, t));
            // N_a φ_s
            for r in 0..e[t] {
                for c in 0..d[s] {
                    let row = a_off[a] + r * d[s] + c;
                    for k in 0..e[s] {
                        let col = v_off[s] + k * d[s] + c;
                        let v = delta.get(row, col).add(na.get(r, k)).expect("field");
                        delta.set(row, col, v);
                    }
                    for k in 0..d[t] {
                        let col = v_off[t] + r * d[t] + k;
                        let v = delta.get(row, col).sub(ma.get(k, c)).expect("field");
                        delta.set(row, col, v);
                    }
                }
            }
        }
        Ok(HomComplex { m, n, delta, v_off, a_off, arrows })
    }

    /// Dimension of the vertex summand `Hom(M_v, N_v)`.
    pub fn dim0(&self, v: usize) -> usize {
        self.m.dims()[v] * self.n.dims()[v]
    }

    /// Dimension of the arrow summand `Hom(M_s, N_t)`.
    pub fn dim1(&self, a: usize) -> usize {
        let (s, t) = self.arrows[a];
        self.m.dims()[s] * self.n.dims()[t]
    }

    pub fn hom_dim(&self) -> usize {
        self.delta.cols() - self.delta.rank()
    }

    pub fn ext1_dim(&self) -> usize {
        self.delta.rows() - self.delta.rank()
    }
}

/// `(dim Hom, dim Ext¹)` between two cellular representations.
pub fn hom_ext_modules(m: &ZigzagModule, n: &ZigzagModule) -> Result<(usize, usize)> {
    let h = HomComplex::new(m, n)?;
    Ok((h.hom_dim(), h.ext1_dim()))
}

/// Graded `RHom` dimensions between two complexes given by graded barcodes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SheafHom {
    /// `(degree in f, degree in g) -> (dim Hom, dim Ext¹)` between the cohomology sheaves.
    pub by_degree_pair: BTreeMap<(i32, i32), (usize, usize)>,
    /// `n -> dim Hom(f, g[n])`.
    pub ext: BTreeMap<i32, usize>,
    /// Total dimension of `Ext²` and `Ext³` between cohomology sheaves, computed
    /// independently from the bar complex. Zero on the line.
    pub higher: usize,
}

fn module(field: FieldId, b: &Barcode) -> ZigzagModule {
    barcode_on_grid(field, b, &grid_of(b)).expect("own grid")
}

pub fn sheaf_hom(field: FieldId, f: &GradedBarcode, g: &GradedBarcode) -> Result<SheafHom> {
    let mut out = SheafHom::default();
    for (i, bf) in f.components() {
        let mf = module(field, bf);
        for (j, bg) in g.components() {
            let mg = module(field, bg);
            let h = HomComplex::new(&mf, &mg)?;
            let (hom, ext1) = (h.hom_dim(), h.ext1_dim());
            out.higher += bar_ext_dims(&mf, &mg, 3)?[2..].iter().sum::<usize>();
            out.by_degree_pair.insert((*i, *j), (hom, ext1));
            if hom > 0 {
                *out.ext.entry(j - i).or_default() += hom;
            }
            if ext1 > 0 {
                *out.ext.entry(j - i + 1).or_default() += ext1;
            }
        }
    }
    Ok(out)
}

/// Degreewise `k_I ⊗ k_J = k_{I∩J}`, degrees adding.
pub fn tensor(f: &GradedBarcode, g: &GradedBarcode) -> GradedBarcode {
    let mut triples = Vec::new();
    for (i, a, m) in f.triples() {
        for (j, b, n) in g.triples() {
            if let Some(c) = a.intersect(&b) {
                triples.push((i + j, c, m * n));
            }
        }
    }
    GradedBarcode::from_triples(triples)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualVariant {
    /// `RHom(·, k_ℝ[1])`
    D,
    /// `RHom(·, k_ℝ)`
    DPrime,
}

/// `D'M` as its two cohomology representations (degrees 0 and 1).
fn dual_prime_module(m: &ZigzagModule) -> (ZigzagModule, ZigzagModule) {
    let field = m.field();
    let grid = m.grid().clone();
    let d = m.dims();
    let mut dims0 = d.to_vec();
    let mut dims1 = vec![0; d.len()];
    let mut maps0 = Vec::new();
    let mut maps1 = Vec::new();
    for i in 0..grid.num_points() {
        let (p, l, r) = (2 * i + 1, 2 * i, 2 * i + 2);
        // compactly supported cochains on the star of p: M_p → M_l ⊕ M_r, x ↦ (-ρ_l x, ρ_r x)
        let diff = m.arrow(p, l).neg().vstack(m.arrow(p, r)).expect("shape");
        let ck = Cokernel::new(&diff);
        let ker = diff.nullspace();
        dims0[p] = ck.dim();
        dims1[p] = ker.cols();
        let incl = |off: usize, len: usize| -> Matrix {
            let cols: Vec<Vector> = (0..len).map(|k| ck.coords(&unit(field, d[l] + d[r], off + k))).collect();
            // transpose of the extension-by-zero map into the star of p
            Matrix::from_columns(field, ck.dim(), &cols).transpose()
        };
        maps0.push((incl(0, d[l]), incl(d[l], d[r])));
        maps1.push((Matrix::zeros(field, 0, ker.cols()), Matrix::zeros(field, 0, ker.cols())));
    }
    (
        ZigzagModule::new(field, grid.clone(), dims0, maps0).expect("shape"),
        ZigzagModule::new(field, grid, dims1, maps1).expect("shape"),
    )
}

pub fn dualize(f: &GradedBarcode, variant: DualVariant) -> GradedBarcode {
    let field = FieldId::F2;
    let mut out = GradedBarcode::zero();
    for (j, b) in f.components() {
        let (h0, h1) = dual_prime_module(&module(field, b));
        out.add_barcode(-j, &decompose(&h0));
        out.add_barcode(1 - j, &decompose(&h1));
    }
    match variant {
        DualVariant::DPrime => out,
        DualVariant::D => out.shift(1),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectionsVariant {
    RGamma,
    RGammaC,
}

/// Cohomology dimensions of global sections, with or without compact support.
pub fn global_sections(f: &GradedBarcode, variant: SectionsVariant) -> BTreeMap<i32, usize> {
    let line = GradedBarcode::single(Interval::real_line(), 0);
    match variant {
        SectionsVariant::RGamma => sheaf_hom(FieldId::F2, &line, f).expect("field").ext,
        SectionsVariant::RGammaC => {
            // H^n_c(F) is dual to Ext^{1-n}(F, k_ℝ)
            let e = sheaf_hom(FieldId::F2, f, &line).expect("field").ext;
            e.into_iter().map(|(n, d)| (1 - n, d)).collect()
        }
    }
}

/// Sections over `(-∞, t)` for `t` in the open cell `2i`: the restriction of the
/// lim-complex to cells `0..=2i`.
struct HalfLine {
    d: Matrix,
    c0_off: Vec<usize>,
    c1_len: usize,
}

fn half_line(m: &ZigzagModule, i: usize) -> HalfLine {
    let field = m.field();
    let dims = m.dims();
    let mut c0_off = Vec::new();
    let mut c0 = 0;
    for v in 0..=2 * i {
        c0_off.push(c0);
        c0 += dims[v];
    }
    let arrows = arrows_of(i);
    let c1: usize = arrows.iter().map(|&(_, t)| dims[t]).sum();
    let mut d = Matrix::zeros(field, c1, c0);
    let mut row = 0;
    for &(s, t) in &arrows {
        let a = m.arrow(s, t);
        for r in 0..dims[t] {
            for c in 0..dims[s] {
                d.set(row + r, c0_off[s] + c, a.get(r, c).clone());
            }
            let v = d.get(row + r, c0_off[t] + r).sub(&field.one()).expect("field");
            d.set(row + r, c0_off[t] + r, v);
        }
        row += dims[t];
    }
    HalfLine { d, c0_off, c1_len: c1 }
}

/// γ-fication of a single cohomology sheaf, as representations in degrees 0 and 1.
fn gammafy_module(m: &ZigzagModule) -> [ZigzagModule; 2] {
    let field = m.field();
    let grid = m.grid().clone();
    let k = grid.num_points();
    let hl: Vec<HalfLine> = (0..=k).map(|i| half_line(m, i)).collect();
    let kers: Vec<Matrix> = hl.iter().map(|h| h.d.nullspace()).collect();
    let cks: Vec<Cokernel> = hl.iter().map(|h| Cokernel::new(&h.d)).collect();
    let mut out = Vec::new();
    for deg in 0..2 {
        let dim_at = |i: usize| if deg == 0 { kers[i].cols() } else { cks[i].dim() };
        // restriction V_{i+1} → V_i
        let restrict = |i: usize| -> Matrix {
            let cols: Vec<Vector> = (0..dim_at(i + 1))
                .map(|c| {
                    if deg == 0 {
                        let v = kers[i + 1].column(c);
                        let cut = hl[i].c0_off.last().map_or(0, |o| o + m.dims()[2 * i]);
                        coords_in(&kers[i], &v[..cut])
                    } else {
                        let e = unit(field, hl[i + 1].c1_len, cks[i + 1].complement[c]);
                        cks[i].coords(&e[..hl[i].c1_len])
                    }
                })
                .collect();
            Matrix::from_columns(field, dim_at(i), &cols)
        };
        let mut dims = Vec::new();
        let mut maps = Vec::new();
        for i in 0..=k {
            dims.push(dim_at(i));
            if i < k {
                dims.push(dim_at(i + 1));
                maps.push((restrict(i), Matrix::identity(field, dim_at(i + 1))));
            }
        }
        out.push(ZigzagModule::new(field, grid.clone(), dims, maps).expect("shape"));
    }
    let b = out.pop().expect("two degrees");
    let a = out.pop().expect("two degrees");
    [a, b]
}

pub fn gammafy(f: &GradedBarcode) -> GradedBarcode {
    let mut out = GradedBarcode::zero();
    for (j, b) in f.components() {
        let [h0, h1] = gammafy_module(&module(FieldId::F2, b));
        out.add_barcode(*j, &decompose(&h0));
        out.add_barcode(j + 1, &decompose(&h1));
    }
    out
}

/// Stalk Euler characteristic `x ↦ Σ (-1)^j dim H^j(F)_x` at a sample point.
pub fn stalk_euler(f: &GradedBarcode, x: &crate::foundations::Rat) -> i64 {
    f.expanded()
        .iter()
        .filter(|(_, i)| i.contains(x))
        .map(|(d, _)| if d % 2 == 0 { 1 } else { -1 })
        .sum()
}

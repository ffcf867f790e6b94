use std::collections::BTreeMap;

use super::elim::{mat_vec, unit, Eliminator, Vector};
use super::grid::CriticalGrid;
use crate::barcodes1d::{Barcode, GradedBarcode, Interval};
use crate::error::{Error, Result};
use crate::foundations::{FieldId, Matrix};

/// Constructible sheaf on the line in cellular form: a representation of the
/// zigzag quiver whose sources are the points and whose sinks are the open cells.
///
/// `maps[i] = (left, right)` are the generization maps of point cell `2i+1`
/// into open cells `2i` and `2i+2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZigzagModule {
    field: FieldId,
    grid: CriticalGrid,
    dims: Vec<usize>,
    maps: Vec<(Matrix, Matrix)>,
}

impl ZigzagModule {
    pub fn new(field: FieldId, grid: CriticalGrid, dims: Vec<usize>, maps: Vec<(Matrix, Matrix)>) -> Result<ZigzagModule> {
        if dims.len() != grid.num_cells() {
            return Err(Error::Shape(format!("expected {} stalk dimensions, got {}", grid.num_cells(), dims.len())));
        }
        if maps.len() != grid.num_points() {
            return Err(Error::Shape(format!("expected {} map pairs, got {}", grid.num_points(), maps.len())));
        }
        for (i, (l, r)) in maps.iter().enumerate() {
            let p = dims[2 * i + 1];
            if l.rows() != dims[2 * i] || l.cols() != p || r.rows() != dims[2 * i + 2] || r.cols() != p {
                return Err(Error::Shape(format!("map shapes at point {i} do not match stalks")));
            }
            if l.field() != field || r.field() != field {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(ZigzagModule { field, grid, dims, maps })
    }

    pub fn zero(field: FieldId, grid: CriticalGrid) -> ZigzagModule {
        let n = grid.num_points();
        let maps = (0..n).map(|_| (Matrix::zeros(field, 0, 0), Matrix::zeros(field, 0, 0))).collect();
        ZigzagModule { field, dims: vec![0; grid.num_cells()], grid, maps }
    }

    pub fn field(&self) -> FieldId {
        self.field
    }

    pub fn grid(&self) -> &CriticalGrid {
        &self.grid
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[(Matrix, Matrix)] {
        &self.maps
    }

    /// Map of point cell `p` into the adjacent open cell `t` (`t = p - 1` or `p + 1`).
    pub fn arrow(&self, p: usize, t: usize) -> &Matrix {
        let (l, r) = &self.maps[(p - 1) / 2];
        if t + 1 == p {
            l
        } else {
            debug_assert_eq!(t, p + 1);
            r
        }
    }

    /// Arrows as `(source point, target open cell)`, left before right, ordered by point.
    pub fn arrows(&self) -> Vec<(usize, usize)> {
        arrows_of(self.grid.num_points())
    }

    /// Representation on a grid containing `self.grid`.
    pub fn refine(&self, fine: &CriticalGrid) -> Result<ZigzagModule> {
        if !fine.contains_grid(&self.grid) {
            return Err(Error::Invalid("refinement must contain the original grid".into()));
        }
        let owner: Vec<usize> = (0..fine.num_cells()).map(|c| self.grid.locate(&fine.sample(c))).collect();
        let dims: Vec<usize> = owner.iter().map(|&o| self.dims[o]).collect();
        let maps = (0..fine.num_points())
            .map(|i| {
                let o = owner[2 * i + 1];
                if CriticalGrid::is_point(o) {
                    (self.arrow(o, o - 1).clone(), self.arrow(o, o + 1).clone())
                } else {
                    let id = Matrix::identity(self.field, self.dims[o]);
                    (id.clone(), id)
                }
            })
            .collect();
        ZigzagModule::new(self.field, fine.clone(), dims, maps)
    }

    /// Direct sum on a common grid.
    pub fn direct_sum(&self, o: &ZigzagModule) -> Result<ZigzagModule> {
        if self.field != o.field {
            return Err(Error::FieldMismatch);
        }
        let g = self.grid.merge(&o.grid);
        let (a, b) = (self.refine(&g)?, o.refine(&g)?);
        let dims = a.dims.iter().zip(&b.dims).map(|(x, y)| x + y).collect();
        let maps = a
            .maps
            .iter()
            .zip(&b.maps)
            .map(|((l1, r1), (l2, r2))| (block_diag(l1, l2), block_diag(r1, r2)))
            .collect();
        ZigzagModule::new(self.field, g, dims, maps)
    }
}

pub(crate) fn arrows_of(points: usize) -> Vec<(usize, usize)> {
    (0..points).flat_map(|i| [(2 * i + 1, 2 * i), (2 * i + 1, 2 * i + 2)]).collect()
}

pub(crate) fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
    let mut m = Matrix::zeros(a.field(), a.rows() + b.rows(), a.cols() + b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            m.set(i, j, a.get(i, j).clone());
        }
    }
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            m.set(a.rows() + i, a.cols() + j, b.get(i, j).clone());
        }
    }
    m
}

/// Grid made of the finite endpoints of a barcode.
pub fn grid_of(b: &Barcode) -> CriticalGrid {
    CriticalGrid::from_unsorted(b.endpoints())
}

/// Cellular representation of `b` on `grid`, which must contain every endpoint.
pub fn barcode_on_grid(field: FieldId, b: &Barcode, grid: &CriticalGrid) -> Result<ZigzagModule> {
    if !grid.contains_grid(&grid_of(b)) {
        return Err(Error::Invalid("grid must contain every endpoint".into()));
    }
    let bars = b.expanded();
    let members: Vec<Vec<usize>> = (0..grid.num_cells())
        .map(|c| (0..bars.len()).filter(|&k| grid.cell_in(c, &bars[k])).collect())
        .collect();
    let dims = members.iter().map(Vec::len).collect();
    let inclusion = |src: &[usize], tgt: &[usize]| {
        let mut m = Matrix::zeros(field, tgt.len(), src.len());
        for (j, k) in src.iter().enumerate() {
            if let Some(i) = tgt.iter().position(|x| x == k) {
                m.set(i, j, field.one());
            }
        }
        m
    };
    let maps = (0..grid.num_points())
        .map(|i| {
            let p = &members[2 * i + 1];
            (inclusion(p, &members[2 * i]), inclusion(p, &members[2 * i + 2]))
        })
        .collect();
    ZigzagModule::new(field, grid.clone(), dims, maps)
}

/// Per-degree cellular representations on the grid of all endpoints of `g`.
pub fn from_barcode(field: FieldId, g: &GradedBarcode) -> Result<BTreeMap<i32, ZigzagModule>> {
    let grid = CriticalGrid::from_unsorted(g.endpoints());
    g.components().iter().map(|(d, b)| Ok((*d, barcode_on_grid(field, b, &grid)?))).collect()
}

// Lower key may be added to higher key without breaking the interval structure.
fn order_key(birth: usize) -> (u8, i64) {
    if birth % 2 == 1 {
        (0, -(birth as i64))
    } else {
        (1, birth as i64)
    }
}

/// Interval decomposition by a single sweep that keeps an adapted basis.
pub fn decompose(m: &ZigzagModule) -> Barcode {
    let field = m.field;
    let grid = &m.grid;
    let mut bars: Vec<(Vector, usize)> = (0..m.dims[0]).map(|i| (unit(field, m.dims[0], i), 0)).collect();
    let mut out: Vec<Interval> = Vec::new();
    for k in 0..grid.num_cells() - 1 {
        let mut order: Vec<usize> = (0..bars.len()).collect();
        order.sort_by_key(|&i| order_key(bars[i].1));
        let next_dim = m.dims[k + 1];
        let mut next: Vec<(Vector, usize)> = Vec::new();
        if CriticalGrid::is_point(k) {
            // forward map from point k into open cell k+1
            let f = m.arrow(k, k + 1);
            let mut elim = Eliminator::new(field, 1);
            for &i in &order {
                let img = mat_vec(f, &bars[i].0);
                if elim.insert(0, &img) {
                    next.push((img, bars[i].1));
                } else {
                    out.push(grid.span(bars[i].1, k));
                }
            }
            let mut span = Eliminator::new(field, 1);
            for (v, _) in &next {
                span.insert(0, v);
            }
            for j in 0..next_dim {
                let e = unit(field, next_dim, j);
                if span.insert(0, &e) {
                    next.push((e, k + 1));
                }
            }
        } else {
            // backward map from point k+1 into open cell k
            let g = m.arrow(k + 1, k);
            let ng = g.cols();
            let nb = bars.len();
            let mut elim = Eliminator::new(field, ng + nb);
            for j in 0..ng {
                elim.insert(j, &g.column(j));
            }
            let mut survivors = Vec::new();
            for &i in &order {
                let (res, combo) = elim.reduce(&bars[i].0);
                if res.iter().any(|x| !x.is_zero()) {
                    elim.insert(ng + i, &bars[i].0);
                    out.push(grid.span(bars[i].1, k));
                } else {
                    survivors.push((combo[..ng].to_vec(), bars[i].1));
                }
            }
            next.extend(survivors);
            let ker = g.nullspace();
            for j in 0..ker.cols() {
                next.push((ker.column(j), k + 1));
            }
        }
        debug_assert_eq!(next.len(), next_dim);
        bars = next;
    }
    let last = grid.num_cells() - 1;
    for (_, b) in &bars {
        out.push(grid.span(*b, last));
    }
    Barcode::from_intervals(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::{rat, rat_int};
    use proptest::prelude::*;

    fn iv(s: &str) -> Interval {
        s.parse().unwrap()
    }

    #[test]
    fn stalk_dims_example() {
        let b = Barcode::from_intervals([iv("[0,1)"), iv("[0,2)")]);
        let z = from_barcode(FieldId::F2, &GradedBarcode::in_degree_zero(b)).unwrap();
        assert_eq!(z[&0].dims(), &[0, 2, 2, 1, 1, 0, 0]);
    }

    #[test]
    fn decompose_hand_built() {
        // two copies joined diagonally still split as intervals
        let f = FieldId::Q;
        let grid = CriticalGrid::new(vec![rat_int(0)]).unwrap();
        let l = Matrix::from_i64(f, &[&[1, 1], &[0, 1]]);
        let r = Matrix::from_i64(f, &[&[1, 0]]);
        let z = ZigzagModule::new(f, grid, vec![2, 2, 1], vec![(l, r)]).unwrap();
        let b = decompose(&z);
        assert_eq!(b, Barcode::from_intervals([iv("(-inf,+inf)"), iv("(-inf,0]")]));
    }

    #[test]
    fn decompose_needs_reordering() {
        // [0,1] and (0,1) share the open cell; the closed bar must absorb the image
        let f = FieldId::Q;
        let grid = CriticalGrid::new(vec![rat_int(0), rat_int(1)]).unwrap();
        let dims = vec![0, 1, 2, 1, 0];
        let l0 = Matrix::zeros(f, 0, 1);
        let r0 = Matrix::from_i64(f, &[&[1], &[1]]);
        let l1 = Matrix::from_i64(f, &[&[1], &[1]]);
        let r1 = Matrix::zeros(f, 0, 1);
        let z = ZigzagModule::new(f, grid, dims, vec![(l0, r0), (l1, r1)]).unwrap();
        assert_eq!(decompose(&z), Barcode::from_intervals([iv("[0,1]"), iv("(0,1)")]));
    }

    #[test]
    fn refine_preserves_decomposition() {
        let b = Barcode::from_intervals([iv("[0,1)"), iv("(1/2,3]"), iv("{2}")]);
        let g = grid_of(&b);
        let z = barcode_on_grid(FieldId::F2, &b, &g).unwrap();
        let fine = g.merge(&CriticalGrid::new(vec![rat(1, 4), rat_int(5)]).unwrap());
        assert_eq!(decompose(&z.refine(&fine).unwrap()), b);
    }

    fn arb_barcode() -> impl Strategy<Value = Barcode> {
        prop::collection::vec(crate::barcodes1d::tests::arb_interval(), 0..6).prop_map(Barcode::from_intervals)
    }

    proptest! {
        #[test]
        fn round_trip(b in arb_barcode(), q in any::<bool>()) {
            let field = if q { FieldId::Q } else { FieldId::F2 };
            let z = barcode_on_grid(field, &b, &grid_of(&b)).unwrap();
            prop_assert_eq!(decompose(&z), b);
        }
    }
}

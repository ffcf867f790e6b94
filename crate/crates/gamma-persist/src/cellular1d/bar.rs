//! `Ext^j` between cellular representations via the unnormalized bar
//! complex of the cell poset (points below their neighbouring open cells).

use std::collections::HashMap;

use super::grid::CriticalGrid;
use super::zigzag::ZigzagModule;
use crate::error::{Error, Result};
use crate::foundations::{FieldElem, FieldId, Matrix};

fn up(cell: usize, cells: usize) -> Vec<usize> {
    let mut v = vec![cell];
    if CriticalGrid::is_point(cell) {
        v.push(cell - 1);
        if cell + 1 < cells {
            v.push(cell + 1);
        }
    }
    v
}

/// Non-decreasing chains with `len` entries.
fn chains(cells: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..cells).map(|c| vec![c]).collect();
    for _ in 1..len {
        out = out
            .into_iter()
            .flat_map(|ch| {
                let last = *ch.last().unwrap();
                up(last, cells).into_iter().map(move |n| {
                    let mut c = ch.clone();
                    c.push(n);
                    c
                })
            })
            .collect();
    }
    out
}

struct Cochains {
    index: HashMap<Vec<usize>, usize>,
    chains: Vec<Vec<usize>>,
    offsets: Vec<usize>,
    dim: usize,
}

impl Cochains {
    fn new(cells: usize, j: usize, d: &[usize], e: &[usize]) -> Cochains {
        let chains = chains(cells, j + 1);
        let mut offsets = Vec::with_capacity(chains.len());
        let mut index = HashMap::new();
        let mut dim = 0;
        for (i, ch) in chains.iter().enumerate() {
            index.insert(ch.clone(), i);
            offsets.push(dim);
            dim += e[*ch.last().unwrap()] * d[ch[0]];
        }
        Cochains { index, chains, offsets, dim }
    }

    fn offset(&self, ch: &[usize]) -> usize {
        self.offsets[self.index[ch]]
    }
}

fn map<'a>(m: &'a ZigzagModule, id: &'a Matrix, p: usize, q: usize) -> &'a Matrix {
    if p == q {
        id
    } else {
        m.arrow(p, q)
    }
}

fn rank(field: FieldId, rows: usize, cols: usize, entries: HashMap<(usize, usize), FieldElem>) -> usize {
    match field {
        FieldId::F2 => {
            let words = cols.div_ceil(64).max(1);
            let mut m = vec![vec![0u64; words]; rows];
            for ((r, c), v) in entries {
                if !v.is_zero() {
                    m[r][c / 64] |= 1 << (c % 64);
                }
            }
            let mut rank = 0;
            for c in 0..cols {
                let (w, b) = (c / 64, 1u64 << (c % 64));
                let Some(p) = (rank..rows).find(|&r| m[r][w] & b != 0) else { continue };
                m.swap(rank, p);
                let pivot = m[rank].clone();
                for row in m.iter_mut().skip(rank + 1) {
                    if row[w] & b != 0 {
                        row.iter_mut().zip(&pivot).for_each(|(x, y)| *x ^= y);
                    }
                }
                rank += 1;
            }
            rank
        }
        FieldId::Q => {
            let mut m = Matrix::zeros(field, rows, cols);
            for ((r, c), v) in entries {
                m.set(r, c, v);
            }
            m.rank()
        }
    }
}

/// `dim Ext^j(M, N)` for `j = 0..=top`.
pub fn bar_ext_dims(m: &ZigzagModule, n: &ZigzagModule, top: usize) -> Result<Vec<usize>> {
    if m.field() != n.field() {
        return Err(Error::FieldMismatch);
    }
    let field = m.field();
    let g = m.grid().merge(n.grid());
    let (m, n) = (m.refine(&g)?, n.refine(&g)?);
    let (d, e) = (m.dims().to_vec(), n.dims().to_vec());
    let cells = d.len();
    let ids_m: Vec<Matrix> = d.iter().map(|&k| Matrix::identity(field, k)).collect();
    let ids_n: Vec<Matrix> = e.iter().map(|&k| Matrix::identity(field, k)).collect();
    let co: Vec<Cochains> = (0..=top + 1).map(|j| Cochains::new(cells, j, &d, &e)).collect();

    // rank of δ^j : C^j -> C^{j+1}
    let mut ranks = Vec::with_capacity(top + 1);
    for j in 0..=top {
        let (src, tgt) = (&co[j], &co[j + 1]);
        let mut entries: HashMap<(usize, usize), FieldElem> = HashMap::new();
        let mut acc = |r: usize, c: usize, v: FieldElem| {
            if v.is_zero() {
                return;
            }
            let slot = entries.entry((r, c)).or_insert_with(|| field.zero());
            *slot = slot.add(&v).expect("field");
        };
        let sign = |i: usize| if i % 2 == 0 { field.one() } else { field.one().neg() };
        for (t, tau) in tgt.chains.iter().enumerate() {
            let (t0, tl) = (tau[0], tau[j + 1]);
            let row0 = tgt.offsets[t];
            let (ds, et) = (d[t0], e[tl]);
            // N(τ_j ≤ τ_{j+1}) φ(τ_0..τ_j)
            let head = &tau[..=j];
            let (hoff, eh) = (src.offset(head), e[tau[j]]);
            let nm = map(&n, &ids_n[tl], tau[j], tl);
            for r in 0..et {
                for c in 0..ds {
                    for k in 0..eh {
                        acc(row0 + r * ds + c, hoff + k * ds + c, nm.get(r, k).clone());
                    }
                }
            }
            // alternating face terms
            for i in 1..=j {
                let mut face = tau.clone();
                face.remove(i);
                let foff = src.offset(&face);
                for x in 0..et * ds {
                    acc(row0 + x, foff + x, sign(j + 1 - i));
                }
            }
            // ± φ(τ_1..τ_{j+1}) M(τ_0 ≤ τ_1)
            let tail = &tau[1..];
            let (toff, dt) = (src.offset(tail), d[tau[1]]);
            let mm = map(&m, &ids_m[tau[1]], t0, tau[1]);
            let s = sign(j + 1);
            for r in 0..et {
                for c in 0..ds {
                    for k in 0..dt {
                        acc(row0 + r * ds + c, toff + r * dt + k, mm.get(k, c).mul(&s).expect("field"));
                    }
                }
            }
        }
        ranks.push(rank(field, tgt.dim, src.dim, entries));
    }
    Ok((0..=top)
        .map(|j| co[j].dim - ranks[j] - if j > 0 { ranks[j - 1] } else { 0 })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barcodes1d::{Barcode, Interval};
    use crate::cellular1d::ops::HomComplex;
    use crate::cellular1d::zigzag::{barcode_on_grid, grid_of};
    use proptest::prelude::*;

    fn module(field: FieldId, b: &Barcode) -> ZigzagModule {
        barcode_on_grid(field, b, &grid_of(b)).unwrap()
    }

    #[test]
    fn closed_half_line_into_open_one() {
        let a = Barcode::from_intervals(["[0,+inf)".parse::<Interval>().unwrap()]);
        let b = Barcode::from_intervals(["(-inf,0)".parse::<Interval>().unwrap()]);
        for field in [FieldId::F2, FieldId::Q] {
            let dims = bar_ext_dims(&module(field, &a), &module(field, &b), 3).unwrap();
            assert_eq!(dims, vec![0, 1, 0, 0]);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn agrees_with_two_term_complex(
            a in prop::collection::vec(crate::barcodes1d::tests::arb_interval(), 0..3),
            b in prop::collection::vec(crate::barcodes1d::tests::arb_interval(), 0..3),
            q in any::<bool>(),
        ) {
            let field = if q { FieldId::Q } else { FieldId::F2 };
            let (ma, mb) = (module(field, &Barcode::from_intervals(a)), module(field, &Barcode::from_intervals(b)));
            let h = HomComplex::new(&ma, &mb).unwrap();
            let dims = bar_ext_dims(&ma, &mb, 3).unwrap();
            prop_assert_eq!(dims, vec![h.hom_dim(), h.ext1_dim(), 0, 0]);
        }
    }
}

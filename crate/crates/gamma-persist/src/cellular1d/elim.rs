use crate::foundations::{FieldElem, FieldId, Matrix};

pub(crate) type Vector = Vec<FieldElem>;

pub(crate) fn unit(field: FieldId, n: usize, i: usize) -> Vector {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

pub(crate) fn axpy(y: &mut [FieldElem], a: &FieldElem, x: &[FieldElem]) {
    if a.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi = yi.add(&a.mul(xi).expect("field")).expect("field");
        }
    }
}

pub(crate) fn mat_vec(m: &Matrix, v: &[FieldElem]) -> Vector {
    let mut out = vec![m.field().zero(); m.rows()];
    for (i, o) in out.iter_mut().enumerate() {
        for (j, x) in v.iter().enumerate() {
            if !x.is_zero() {
                let e = m.get(i, j);
                if !e.is_zero() {
                    *o = o.add(&e.mul(x).expect("field")).expect("field");
                }
            }
        }
    }
    out
}

/// Incremental Gaussian elimination that tracks, for every stored row, its
/// expression in terms of the inserted generators.
pub(crate) struct Eliminator {
    field: FieldId,
    ngen: usize,
    rows: Vec<(usize, Vector, Vector)>,
}

impl Eliminator {
    pub fn new(field: FieldId, ngen: usize) -> Eliminator {
        Eliminator { field, ngen, rows: Vec::new() }
    }

    /// Reduces `v`; returns the residue and the combination `c` with
    /// `v = residue + sum c_g * generator_g`.
    pub fn reduce(&self, v: &[FieldElem]) -> (Vector, Vector) {
        let mut r = v.to_vec();
        let mut c = vec![self.field.zero(); self.ngen];
        for (p, row, combo) in &self.rows {
            if r[*p].is_zero() {
                continue;
            }
            let f = r[*p].clone();
            axpy(&mut r, &f.neg(), row);
            axpy(&mut c, &f, combo);
        }
        (r, c)
    }

    /// Inserts generator `g` with value `v`; returns false if `v` was dependent.
    pub fn insert(&mut self, g: usize, v: &[FieldElem]) -> bool {
        let (r, c) = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else { return false };
        let inv = r[p].inv().expect("nonzero");
        // row = inv * (v - sum c gens), so combo = inv * (e_g - c)
        let mut combo = c.iter().map(|x| x.neg()).collect::<Vector>();
        combo[g] = combo[g].add(&self.field.one()).expect("field");
        let combo: Vector = combo.iter().map(|x| x.mul(&inv).expect("field")).collect();
        let row: Vector = r.iter().map(|x| x.mul(&inv).expect("field")).collect();
        // keep earlier rows reduced against the new pivot
        for (_, orow, ocombo) in self.rows.iter_mut() {
            if !orow[p].is_zero() {
                let f = orow[p].neg();
                axpy(orow, &f, &row);
                axpy(ocombo, &f, &combo);
            }
        }
        self.rows.push((p, row, combo));
        true
    }
}

/// Basis for the cokernel of `d`: standard basis indices not in the span of the image,
/// chosen lowest-first, together with a map sending a vector to its class coordinates.
pub(crate) struct Cokernel {
    pub complement: Vec<usize>,
    elim: Eliminator,
    ncols: usize,
}

impl Cokernel {
    pub fn new(d: &Matrix) -> Cokernel {
        let field = d.field();
        let n = d.rows();
        let ncols = d.cols();
        let mut elim = Eliminator::new(field, ncols + n);
        for j in 0..ncols {
            elim.insert(j, &d.column(j));
        }
        let mut complement = Vec::new();
        for i in 0..n {
            if elim.insert(ncols + i, &unit(field, n, i)) {
                complement.push(i);
            }
        }
        Cokernel { complement, elim, ncols }
    }

    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    /// Coordinates of the class of `v` in the complement basis.
    pub fn coords(&self, v: &[FieldElem]) -> Vector {
        let (r, c) = self.elim.reduce(v);
        debug_assert!(r.iter().all(FieldElem::is_zero));
        self.complement.iter().map(|&i| c[self.ncols + i].clone()).collect()
    }
}

/// Coordinates of `v` in the column basis `b` (columns independent, `v` in their span).
pub(crate) fn coords_in(b: &Matrix, v: &[FieldElem]) -> Vector {
    let mut e = Eliminator::new(b.field(), b.cols());
    for j in 0..b.cols() {
        e.insert(j, &b.column(j));
    }
    let (r, c) = e.reduce(v);
    debug_assert!(r.iter().all(FieldElem::is_zero));
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cokernel_coords() {
        let f = FieldId::Q;
        let d = Matrix::from_i64(f, &[&[1], &[1]]);
        let ck = Cokernel::new(&d);
        assert_eq!(ck.complement, vec![0]);
        let c = ck.coords(&unit(f, 2, 1));
        assert_eq!(c, vec![f.from_i64(-1)]);
    }

    #[test]
    fn eliminator_combo() {
        let f = FieldId::Q;
        let mut e = Eliminator::new(f, 2);
        assert!(e.insert(0, &[f.from_i64(1), f.from_i64(1)]));
        assert!(e.insert(1, &[f.from_i64(1), f.from_i64(-1)]));
        let (r, c) = e.reduce(&[f.from_i64(2), f.from_i64(0)]);
        assert!(r.iter().all(FieldElem::is_zero));
        assert_eq!(c, vec![f.from_i64(1), f.from_i64(1)]);
    }
}

use std::fmt;

use super::field::{FieldElem, FieldId};
use crate::error::{Error, Result};

/// Dense matrix over a single coefficient field, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldId,
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl Matrix {
    pub fn zeros(field: FieldId, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldId, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// Builds a matrix from integer rows, reducing into the field.
    pub fn from_i64(field: FieldId, rows: &[&[i64]]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Matrix::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.data[i * c + j] = field.from_i64(*v);
            }
        }
        m
    }

    /// Builds a matrix from row-major entries, checking that every entry lies in `field`.
    pub fn from_entries(field: FieldId, rows: usize, cols: usize, data: Vec<FieldElem>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!("expected {} entries, got {}", rows * cols, data.len())));
        }
        if data.iter().any(|e| e.field() != field) {
            return Err(Error::FieldMismatch);
        }
        Ok(Matrix { field, rows, cols, data })
    }

    pub fn from_columns(field: FieldId, rows: usize, columns: &[Vec<FieldElem>]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m.data[i * columns.len() + j] = v.clone();
            }
        }
        m
    }

    pub fn field(&self) -> FieldId {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[FieldElem] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        assert_eq!(v.field(), self.field, "field mismatch");
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<FieldElem>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElem::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &Matrix) -> Result<Matrix> {
        if self.field != o.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != o.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Matrix::zeros(self.field, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b)?)?;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, o: &Matrix) -> Result<Matrix> {
        if self.field != o.field {
            return Err(Error::FieldMismatch);
        }
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(Error::Shape("cannot add matrices of different shapes".into()));
        }
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect::<Result<_>>()?;
        Ok(Matrix { field: self.field, rows: self.rows, cols: self.cols, data })
    }

    pub fn neg(&self) -> Matrix {
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data: self.data.iter().map(FieldElem::neg).collect() }
    }

    pub fn hstack(&self, o: &Matrix) -> Result<Matrix> {
        if self.field != o.field {
            return Err(Error::FieldMismatch);
        }
        if self.rows != o.rows {
            return Err(Error::Shape("hstack needs equal row counts".into()));
        }
        let cols = self.cols + o.cols;
        let mut m = Matrix::zeros(self.field, self.rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[i * cols + j] = self.get(i, j).clone();
            }
            for j in 0..o.cols {
                m.data[i * cols + self.cols + j] = o.get(i, j).clone();
            }
        }
        Ok(m)
    }

    pub fn vstack(&self, o: &Matrix) -> Result<Matrix> {
        if self.field != o.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != o.cols {
            return Err(Error::Shape("vstack needs equal column counts".into()));
        }
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Ok(Matrix { field: self.field, rows: self.rows + o.rows, cols: self.cols, data })
    }

    /// Sub-matrix made of the listed columns, in order.
    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                m.data[i * idx.len() + k] = self.get(i, j).clone();
            }
        }
        m
    }

    /// Reduced row echelon form and pivot columns; pivots are taken from the
    /// lowest-index eligible row, column by column.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j).mul(&inv).expect("same field");
                m.data[r * m.cols + j] = v;
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let sub = f.mul(m.get(r, j)).expect("same field");
                    let v = m.get(i, j).sub(&sub).expect("same field");
                    m.data[i * m.cols + j] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the kernel as columns; the basis vector for free column `f`
    /// has a 1 in position `f` and zeros at the other free positions.
    pub fn nullspace(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(self.field, self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            out.data[f * free.len() + k] = self.field.one();
            for (row, &p) in pivots.iter().enumerate() {
                out.data[p * free.len() + k] = r.get(row, f).neg();
            }
        }
        out
    }

    /// Some `x` with `self * x = b`, with free variables set to zero.
    pub fn solve(&self, b: &Matrix) -> Result<Option<Matrix>> {
        if self.field != b.field {
            return Err(Error::FieldMismatch);
        }
        if self.rows != b.rows {
            return Err(Error::Shape("solve needs a.rows == b.rows".into()));
        }
        let aug = self.hstack(b)?;
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(self.field, self.cols, b.cols);
        for (row, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.data[p * b.cols + j] = r.get(row, self.cols + j).clone();
            }
        }
        Ok(Some(x))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

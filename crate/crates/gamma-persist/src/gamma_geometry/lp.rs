use num_traits::{One, Signed, Zero};

use crate::foundations::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lp {
    Infeasible,
    Unbounded,
    Optimal { value: Rat, point: Vec<Rat> },
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            *v *= &inv;
        }
        let pr = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pr) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `obj · y` over `y >= 0` from a feasible basis, using Bland's rule.
    /// Columns at or past `ncols` are never entered.
    fn run(&mut self, obj: &[Rat], ncols: usize) -> bool {
        let width = obj.len() + 1;
        // reduced costs, updated alongside the rows
        let mut cost: Vec<Rat> = (0..width).map(|j| if j < obj.len() { obj[j].clone() } else { Rat::zero() }).collect();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &obj[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (c, v) in cost.iter_mut().zip(row) {
                if !v.is_zero() {
                    *c -= cb * v;
                }
            }
        }
        loop {
            let Some(c) = (0..ncols).find(|&j| cost[j].is_positive()) else { return true };
            let rhs = width - 1;
            let mut best: Option<(usize, Rat)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[rhs] / &row[c];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = best else { return false };
            self.pivot(r, c);
            let f = cost[c].clone();
            for (cj, v) in cost.iter_mut().zip(&self.rows[r]) {
                if !v.is_zero() {
                    *cj -= &f * v;
                }
            }
        }
    }

    fn value(&self, obj: &[Rat]) -> Rat {
        let rhs = self.rows.first().map_or(0, |r| r.len() - 1);
        self.basis.iter().zip(&self.rows).map(|(b, row)| &obj[*b] * &row[rhs]).sum()
    }
}

/// Maximizes `c · x` subject to `A x <= b` with `x` free, exactly.
pub fn maximize(a: &[Vec<Rat>], b: &[Rat], c: &[Rat]) -> Lp {
    let d = c.len();
    let m = a.len();
    // columns: x+ (d), x- (d), slacks (m), artificials (m)
    let nreal = 2 * d + m;
    let ncols = nreal + m;
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![Rat::zero(); ncols + 1];
        let neg = b[i].is_negative();
        let s = if neg { -Rat::one() } else { Rat::one() };
        for j in 0..d {
            row[j] = &s * &a[i][j];
            row[d + j] = -&s * &a[i][j];
        }
        row[2 * d + i] = s.clone();
        row[ncols] = &s * &b[i];
        if neg {
            row[nreal + i] = Rat::one();
            basis.push(nreal + i);
        } else {
            basis.push(2 * d + i);
        }
        rows.push(row);
    }
    let mut t = Tableau { rows, basis };
    let mut phase1 = vec![Rat::zero(); ncols];
    for v in phase1.iter_mut().skip(nreal) {
        *v = -Rat::one();
    }
    t.run(&phase1, ncols);
    if t.value(&phase1).is_negative() {
        return Lp::Infeasible;
    }
    // drive artificials out of the basis; drop redundant rows
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= nreal {
            if let Some(j) = (0..nreal).find(|&j| !t.rows[i][j].is_zero()) {
                t.pivot(i, j);
            } else {
                t.rows.remove(i);
                t.basis.remove(i);
                continue;
            }
        }
        i += 1;
    }
    let mut obj = vec![Rat::zero(); ncols];
    for j in 0..d {
        obj[j] = c[j].clone();
        obj[d + j] = -c[j].clone();
    }
    if !t.run(&obj, nreal) {
        return Lp::Unbounded;
    }
    let mut y = vec![Rat::zero(); nreal];
    for (i, bcol) in t.basis.iter().enumerate() {
        if *bcol < nreal {
            y[*bcol] = t.rows[i][ncols].clone();
        }
    }
    let point: Vec<Rat> = (0..d).map(|j| &y[j] - &y[d + j]).collect();
    Lp::Optimal { value: t.value(&obj), point }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::{rat, rat_int};

    fn v(x: &[i64]) -> Vec<Rat> {
        x.iter().map(|&k| rat_int(k)).collect()
    }

    #[test]
    fn small_programs() {
        // max x + y, x <= 1, y <= 2, x + y <= 5/2
        let a = vec![v(&[1, 0]), v(&[0, 1]), v(&[1, 1])];
        let b = vec![rat_int(1), rat_int(2), rat(5, 2)];
        match maximize(&a, &b, &v(&[1, 1])) {
            Lp::Optimal { value, .. } => assert_eq!(value, rat(5, 2)),
            o => panic!("{o:?}"),
        }
        // x >= 1 and x <= 0
        let a = vec![v(&[-1]), v(&[1])];
        assert_eq!(maximize(&a, &v(&[-1, 0]), &v(&[1])), Lp::Infeasible);
        // x >= -3 unbounded above
        assert_eq!(maximize(&[v(&[-1])], &v(&[3]), &v(&[1])), Lp::Unbounded);
        // negative rhs, optimum at a vertex with negative coordinates
        let a = vec![v(&[1, 0]), v(&[0, 1]), v(&[-1, -1])];
        match maximize(&a, &v(&[-1, -2, 10]), &v(&[1, 1])) {
            Lp::Optimal { value, point } => {
                assert_eq!(value, rat_int(-3));
                assert_eq!(point, v(&[-1, -2]));
            }
            o => panic!("{o:?}"),
        }
    }
}

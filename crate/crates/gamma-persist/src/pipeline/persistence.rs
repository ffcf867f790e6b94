use std::collections::HashMap;

use crate::barcodes1d::{GradedBarcode, Interval};
use crate::error::{Error, Result};
use crate::foundations::{ExtRat, Rat};

use super::MeshFunction;

/// Simplices in entrance order with their lower-star times.
#[derive(Debug, Clone)]
pub struct Filtration {
    pub simplices: Vec<Vec<usize>>,
    pub times: Vec<Rat>,
}

/// A simplex enters `{f <= t}` once its highest vertex does.
pub fn lower_star_filtration(f: &MeshFunction) -> Filtration {
    let mut cells: Vec<(Rat, Vec<usize>)> = f
        .mesh
        .simplices()
        .iter()
        .map(|s| (s.iter().map(|&v| f.values[v].clone()).max().expect("non-empty simplex"), s.clone()))
        .collect();
    cells.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.len().cmp(&b.1.len())).then(a.1.cmp(&b.1)));
    let (times, simplices) = cells.into_iter().unzip();
    Filtration { simplices, times }
}

fn boundary(s: &[usize], index: &HashMap<&[usize], usize>) -> Vec<usize> {
    if s.len() == 1 {
        return Vec::new();
    }
    let mut b: Vec<usize> = (0..s.len())
        .map(|i| {
            let face: Vec<usize> = s.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, &v)| v).collect();
            index[face.as_slice()]
        })
        .collect();
    b.sort_unstable();
    b
}

fn add_into(a: &mut Vec<usize>, b: &[usize]) {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x == y => {
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push(*x);
                i += 1;
            }
            (Some(x), None) => {
                out.push(*x);
                i += 1;
            }
            (_, Some(y)) => {
                out.push(*y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    *a = out;
}

/// The γ-barcode (γ = ℝ≤0) of `t ↦ H^*({f <= t})`, by column reduction over F₂.
pub fn sublevel_persistence(f: &MeshFunction) -> Result<GradedBarcode> {
    if !f.compact_sublevels {
        return Err(Error::Invalid("sublevel sets are not declared compact".into()));
    }
    if f.values.len() != f.mesh.vertices().len() {
        return Err(Error::Shape("one value per vertex is required".into()));
    }
    let filt = lower_star_filtration(f);
    let index: HashMap<&[usize], usize> = filt.simplices.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
    let mut cols: Vec<Vec<usize>> = filt.simplices.iter().map(|s| boundary(s, &index)).collect();
    let mut owner: HashMap<usize, usize> = HashMap::new();
    let mut paired = vec![false; cols.len()];
    let mut triples = Vec::new();
    for j in 0..cols.len() {
        while let Some(&low) = cols[j].last() {
            match owner.get(&low) {
                Some(&k) => {
                    let other = std::mem::take(&mut cols[k]);
                    add_into(&mut cols[j], &other);
                    cols[k] = other;
                }
                None => break,
            }
        }
        if let Some(&low) = cols[j].last() {
            owner.insert(low, j);
            paired[low] = true;
            paired[j] = true;
            let (a, b) = (&filt.times[low], &filt.times[j]);
            if a < b {
                let bar = Interval::gamma(ExtRat::Finite(a.clone()), ExtRat::Finite(b.clone()))?;
                triples.push(((filt.simplices[low].len() - 1) as i32, bar, 1));
            }
        }
    }
    for (i, s) in filt.simplices.iter().enumerate() {
        if !paired[i] {
            let bar = Interval::gamma(ExtRat::Finite(filt.times[i].clone()), ExtRat::PosInf)?;
            triples.push(((s.len() - 1) as i32, bar, 1));
        }
    }
    Ok(GradedBarcode::from_triples(triples))
}

/// Betti numbers over F₂ of the subcomplex `{f <= t}`, by direct rank computation.
pub fn betti_numbers(f: &MeshFunction, t: &Rat) -> Vec<usize> {
    let filt = lower_star_filtration(f);
    let live: Vec<&Vec<usize>> = filt.simplices.iter().zip(&filt.times).filter(|(_, s)| *s <= t).map(|(c, _)| c).collect();
    let top = live.iter().map(|s| s.len()).max().unwrap_or(0);
    let index: HashMap<&[usize], usize> = live.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
    let count = |k: usize| live.iter().filter(|s| s.len() == k + 1).count();
    let rank = |k: usize| -> usize {
        // rank of the boundary from k-simplices to (k-1)-simplices
        if k == 0 {
            return 0;
        }
        let mut pivots: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut r = 0;
        for s in live.iter().filter(|s| s.len() == k + 1) {
            let mut c = boundary(s, &index);
            while let Some(&low) = c.last() {
                match pivots.get(&low) {
                    Some(p) => add_into(&mut c, p),
                    None => break,
                }
            }
            if let Some(&low) = c.last() {
                pivots.insert(low, c);
                r += 1;
            }
        }
        r
    };
    (0..top).map(|k| count(k) - rank(k) - rank(k + 1)).collect()
}

use num_traits::One;

use crate::barcodes1d::Interval;
use crate::error::{Error, Result};
use crate::foundations::{ExtRat, Rat};

/// Strictly increasing critical values `c_1 < ... < c_m`, inducing `2m+1` cells:
/// even index `2i` is the open cell `(c_i, c_{i+1})`, odd index `2i+1` is `{c_{i+1}}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CriticalGrid {
    values: Vec<Rat>,
}

impl CriticalGrid {
    pub fn new(values: Vec<Rat>) -> Result<CriticalGrid> {
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("critical values must be strictly increasing".into()));
        }
        Ok(CriticalGrid { values })
    }

    /// Sorted, deduplicated grid from arbitrary values.
    pub fn from_unsorted<I: IntoIterator<Item = Rat>>(it: I) -> CriticalGrid {
        let mut v: Vec<Rat> = it.into_iter().collect();
        v.sort();
        v.dedup();
        CriticalGrid { values: v }
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn num_points(&self) -> usize {
        self.values.len()
    }

    pub fn num_cells(&self) -> usize {
        2 * self.values.len() + 1
    }

    pub fn is_point(cell: usize) -> bool {
        cell % 2 == 1
    }

    /// Value of a point cell.
    pub fn point_value(&self, cell: usize) -> &Rat {
        debug_assert!(Self::is_point(cell));
        &self.values[(cell - 1) / 2]
    }

    /// Left end of an open cell.
    pub fn open_lower(&self, cell: usize) -> ExtRat {
        let i = cell / 2;
        if i == 0 {
            ExtRat::NegInf
        } else {
            ExtRat::Finite(self.values[i - 1].clone())
        }
    }

    /// Right end of an open cell.
    pub fn open_upper(&self, cell: usize) -> ExtRat {
        let i = cell / 2;
        if i == self.values.len() {
            ExtRat::PosInf
        } else {
            ExtRat::Finite(self.values[i].clone())
        }
    }

    /// A point inside the cell.
    pub fn sample(&self, cell: usize) -> Rat {
        if Self::is_point(cell) {
            return self.point_value(cell).clone();
        }
        match (self.open_lower(cell), self.open_upper(cell)) {
            (ExtRat::Finite(a), ExtRat::Finite(b)) => (a + b) / Rat::from_integer(2.into()),
            (ExtRat::Finite(a), _) => a + Rat::one(),
            (_, ExtRat::Finite(b)) => b - Rat::one(),
            _ => Rat::from_integer(0.into()),
        }
    }

    /// Whether the cell lies in the interval; the grid must contain the interval's endpoints.
    pub fn cell_in(&self, cell: usize, i: &Interval) -> bool {
        i.contains(&self.sample(cell))
    }

    /// Union of both grids.
    pub fn merge(&self, o: &CriticalGrid) -> CriticalGrid {
        CriticalGrid::from_unsorted(self.values.iter().chain(o.values.iter()).cloned())
    }

    pub fn contains_grid(&self, o: &CriticalGrid) -> bool {
        o.values.iter().all(|v| self.values.binary_search(v).is_ok())
    }

    /// Index of the cell of `self` containing `x`.
    pub fn locate(&self, x: &Rat) -> usize {
        match self.values.binary_search(x) {
            Ok(i) => 2 * i + 1,
            Err(i) => 2 * i,
        }
    }

    /// Interval spanning cells `start..=end`.
    pub fn span(&self, start: usize, end: usize) -> Interval {
        let (lower, lc) = if Self::is_point(start) {
            (ExtRat::Finite(self.point_value(start).clone()), true)
        } else {
            (self.open_lower(start), false)
        };
        let (upper, uc) = if Self::is_point(end) {
            (ExtRat::Finite(self.point_value(end).clone()), true)
        } else {
            (self.open_upper(end), false)
        };
        Interval::new(lower, upper, lc, uc).expect("cell span is a valid interval")
    }
}

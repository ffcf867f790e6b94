//! Exact scalars, extended rationals, coefficient fields and dense matrices.

mod ext;
mod field;
mod matrix;
mod rat;

pub use ext::{ext_cmp, ExtRat};
pub use field::{FieldElem, FieldId};
pub use matrix::Matrix;
pub use rat::{fmt_decimal, parse_rat, rat, rat_int, Rat};

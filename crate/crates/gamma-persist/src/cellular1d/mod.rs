//! Cellular model of constructible sheaves on the line.

mod bar;
pub(crate) mod elim;
mod grid;
pub(crate) mod ops;
mod zigzag;

pub use grid::CriticalGrid;
pub use ops::{
    dualize, gammafy, global_sections, hom_ext_modules, sheaf_hom, stalk_euler, tensor, DualVariant, SectionsVariant, SheafHom,
};
pub use zigzag::{barcode_on_grid, decompose, from_barcode, grid_of, ZigzagModule};

//! Exact persistence for constructible sheaves on the real line, convolution
//! distance, and polyhedral gamma-topology in finite dimension.

pub mod barcodes1d;
pub mod cellular1d;
pub mod convolution1d;
pub mod error;
pub mod gamma_geometry;
pub mod io;
pub mod pipeline;
pub mod stratify_nd;
pub mod foundations;

pub use error::{Error, Result};

//! Problem definition, grids, angular bases, quadrature and discrete Sobolev norms.

pub mod basis;
pub mod fd;
pub mod grid;
pub mod norms;
pub mod params;
pub mod quad;

pub use basis::{BasisKind, CosineBasis, SineBasis};
pub use grid::Grid;
pub use norms::discrete_norm;
pub use params::{GasConfig, InletState, NozzleGeometry};
pub use quad::inner_product;

use ndarray::{Array1, ArrayView1};

use crate::error::Result;

/// `(⟨f, η_k⟩)_{k=0..m}`.
pub fn project(field: ArrayView1<f64>, basis: &CosineBasis, grid: &Grid) -> Result<Array1<f64>> {
    basis.project(field, grid)
}

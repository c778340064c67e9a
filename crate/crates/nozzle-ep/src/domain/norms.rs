use ndarray::Array2;

use super::fd;
use super::grid::Grid;
use super::quad::integrate2;
use crate::error::{Error, Result};

/// Discrete `H^k` norm, `k ≤ 2`: square root of the summed squared `L²` norms of all partial
/// derivatives of total order at most `k`.
pub fn discrete_norm(field: &Array2<f64>, grid: &Grid, k: usize) -> Result<f64> {
    if k > 2 {
        return Err(Error::UnsupportedOrder(k));
    }
    grid.check_field(field)?;
    let sq = |f: &Array2<f64>| integrate2(grid, &f.mapv(|v| v * v));
    let mut total = sq(field);
    if k >= 1 {
        let fr = fd::dr(field, grid.dr);
        let ft = fd::dtheta(field, grid.dtheta);
        total += sq(&fr) + sq(&ft);
        if k == 2 {
            total += sq(&fd::drr(field, grid.dr));
            total += sq(&fd::dtheta(&fr, grid.dtheta));
            total += sq(&fd::dtt(field, grid.dtheta));
        }
    }
    Ok(total.max(0.0).sqrt())
}

/// Discrete `L²` norm of a grid field.
pub fn l2(field: &Array2<f64>, grid: &Grid) -> f64 {
    integrate2(grid, &field.mapv(|v| v * v)).max(0.0).sqrt()
}

/// `L²(Γ)` norm of a θ-sampled function.
pub fn l2_theta(f: &ndarray::Array1<f64>, dtheta: f64) -> f64 {
    super::quad::dot_trap(f.view(), f.view(), dtheta).max(0.0).sqrt()
}

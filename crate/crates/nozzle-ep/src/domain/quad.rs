//! Composite trapezoid quadrature and cumulative integrals.

use ndarray::{Array1, Array2, ArrayView1};

use super::grid::Grid;
use crate::error::{Error, Result};

/// Trapezoid weights for `n` uniform nodes with spacing `h`.
pub fn trapezoid_weights(n: usize, h: f64) -> Array1<f64> {
    let mut w = Array1::from_elem(n, h);
    w[0] *= 0.5;
    w[n - 1] *= 0.5;
    w
}

/// Composite trapezoid approximation of `∫ f g dθ` over the angular nodes.
pub fn inner_product(f: ArrayView1<f64>, g: ArrayView1<f64>, dtheta: f64) -> Result<f64> {
    if f.len() != g.len() {
        return Err(Error::SizeMismatch { expected: f.len(), got: g.len() });
    }
    if f.len() < 2 {
        return Err(Error::SizeMismatch { expected: 2, got: f.len() });
    }
    Ok(dot_trap(f, g, dtheta))
}

pub(crate) fn dot_trap(f: ArrayView1<f64>, g: ArrayView1<f64>, h: f64) -> f64 {
    let n = f.len();
    let mut s = 0.5 * (f[0] * g[0] + f[n - 1] * g[n - 1]);
    for k in 1..n - 1 {
        s += f[k] * g[k];
    }
    s * h
}

/// Tensor trapezoid integral of a grid field.
pub fn integrate2(grid: &Grid, f: &Array2<f64>) -> f64 {
    let wr = trapezoid_weights(grid.nr, grid.dr);
    let wt = trapezoid_weights(grid.ntheta, grid.dtheta);
    let mut s = 0.0;
    for i in 0..grid.nr {
        let mut row = 0.0;
        for j in 0..grid.ntheta {
            row += wt[j] * f[[i, j]];
        }
        s += wr[i] * row;
    }
    s
}

/// Running trapezoid integral, zero at the first node.
pub fn cumulative_trapezoid(f: ArrayView1<f64>, h: f64) -> Array1<f64> {
    let mut out = Array1::zeros(f.len());
    for k in 1..f.len() {
        out[k] = out[k - 1] + 0.5 * h * (f[k - 1] + f[k]);
    }
    out
}

/// Running integral with fourth-order accurate cubic panels, zero at the first node.
/// Falls back to trapezoid for fewer than four nodes.
pub fn cumulative_quartic(f: ArrayView1<f64>, h: f64) -> Array1<f64> {
    let n = f.len();
    if n < 4 {
        return cumulative_trapezoid(f, h);
    }
    let c = h / 24.0;
    let mut out = Array1::zeros(n);
    out[1] = c * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
    for i in 1..n - 2 {
        out[i + 1] = out[i] + c * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]);
    }
    let i = n - 2;
    out[n - 1] = out[i] + c * (f[i - 2] - 5.0 * f[i - 1] + 19.0 * f[i] + 9.0 * f[i + 1]);
    out
}

//! Divergence potential `φ`, the velocity shift it induces, and the curl potential `ψ`.

use ndarray::{Array1, Array2};

use crate::domain::{fd, quad, Grid, SineBasis};
use crate::error::{Error, Result};

/// Solved divergence potential with its derivatives on the grid.
#[derive(Debug, Clone)]
pub struct DivPotential {
    /// Sine coefficients `[i_r, k-1]`.
    pub modes: Array2<f64>,
    pub phi: Array2<f64>,
    pub phi_r: Array2<f64>,
    pub phi_theta: Array2<f64>,
    pub phi_rr: Array2<f64>,
    pub phi_tt: Array2<f64>,
    pub phi_rt: Array2<f64>,
}

impl DivPotential {
    pub fn zeros(grid: &Grid, n: usize) -> Self {
        Self {
            modes: Array2::zeros((grid.nr, n)),
            phi: grid.zeros(),
            phi_r: grid.zeros(),
            phi_theta: grid.zeros(),
            phi_rr: grid.zeros(),
            phi_tt: grid.zeros(),
            phi_rt: grid.zeros(),
        }
    }
}

/// Thomas algorithm; `a` sub-, `b` main, `c` super-diagonal. Fails on a vanishing pivot.
fn tridiagonal(a: &[f64], b: &[f64], c: &[f64], d: &mut [f64], mode: usize) -> Result<()> {
    let n = b.len();
    let mut cp = vec![0.0; n];
    let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut piv = b[0];
    if !(piv.abs() > 1e-14 * scale) {
        return Err(Error::ModeSingular { mode, pivot: piv });
    }
    cp[0] = c[0] / piv;
    d[0] /= piv;
    for i in 1..n {
        piv = b[i] - a[i] * cp[i - 1];
        if !(piv.abs() > 1e-14 * scale) {
            return Err(Error::ModeSingular { mode, pivot: piv });
        }
        cp[i] = c[i] / piv;
        d[i] = (d[i] - a[i] * d[i - 1]) / piv;
    }
    for i in (0..n - 1).rev() {
        d[i] -= cp[i] * d[i + 1];
    }
    Ok(())
}

/// Single sine mode: `φ'' - φ'/r̂ - w²φ/r̂² = s/r̂` with `φ'(0) = φ'(R) = 0` (ghost points).
pub fn solve_sine_mode(src: &Array1<f64>, rhat: &Array1<f64>, dr: f64, w: f64, mode: usize) -> Result<Array1<f64>> {
    let n = src.len();
    let h2 = 1.0 / (dr * dr);
    let h1 = 0.5 / dr;
    let mut a = vec![0.0; n];
    let mut b = vec![0.0; n];
    let mut c = vec![0.0; n];
    let mut d: Vec<f64> = (0..n).map(|i| src[i] / rhat[i]).collect();
    for i in 0..n {
        b[i] = -2.0 * h2 - w * w / (rhat[i] * rhat[i]);
        if i == 0 {
            c[0] = 2.0 * h2;
        } else if i == n - 1 {
            a[i] = 2.0 * h2;
        } else {
            a[i] = h2 + h1 / rhat[i];
            c[i] = h2 - h1 / rhat[i];
        }
    }
    tridiagonal(&a, &b, &c, &mut d, mode)?;
    Ok(Array1::from(d))
}

/// `φ_rr + φ_θθ/r̂² - φ_r/r̂ = f3/r̂`, `φ = 0` on the walls, `φ_r = 0` at entrance and exit.
pub fn solve_div_potential(f3: &Array2<f64>, grid: &Grid, sine: &SineBasis) -> Result<DivPotential> {
    grid.check_field(f3)?;
    sine.check_aliasing(grid.ntheta)?;
    let n = sine.n;
    let tab = sine.table(&grid.theta);
    let dtab = sine.dtable(&grid.theta);
    let mut modes = Array2::zeros((grid.nr, n));
    let mut dmodes = Array2::zeros((grid.nr, n));
    let mut ddmodes = Array2::zeros((grid.nr, n));
    let last = grid.nr - 1;
    for k in 0..n {
        let src = Array1::from_shape_fn(grid.nr, |i| quad::dot_trap(f3.row(i), tab.row(k), grid.dtheta) / sine.theta0);
        if src.iter().all(|v| *v == 0.0) {
            continue;
        }
        let w = sine.wavenumber(k + 1);
        let col = solve_sine_mode(&src, &grid.rhat, grid.dr, w, k + 1)?;
        let mut dcol = fd::d1(col.view(), grid.dr);
        dcol[0] = 0.0;
        dcol[last] = 0.0;
        let mut ddcol = fd::d2(col.view(), grid.dr);
        ddcol[0] = 2.0 * (col[1] - col[0]) / (grid.dr * grid.dr);
        ddcol[last] = 2.0 * (col[last - 1] - col[last]) / (grid.dr * grid.dr);
        modes.column_mut(k).assign(&col);
        dmodes.column_mut(k).assign(&dcol);
        ddmodes.column_mut(k).assign(&ddcol);
    }
    let wsq = Array1::from_shape_fn(n, |k| sine.wavenumber(k + 1).powi(2));
    let phi = modes.dot(&tab);
    let phi_tt = -(&modes * &wsq).dot(&tab);
    Ok(DivPotential {
        phi_r: dmodes.dot(&tab),
        phi_rr: ddmodes.dot(&tab),
        phi_theta: modes.dot(&dtab),
        phi_rt: dmodes.dot(&dtab),
        phi_tt,
        phi,
        modes,
    })
}

/// `(Ǔ, V̌) = (𝒰 + φ_θ/r̂, 𝒱 - φ_r)`.
pub fn shift_velocity(u: &Array2<f64>, v: &Array2<f64>, pot: &DivPotential, grid: &Grid) -> (Array2<f64>, Array2<f64>) {
    let mut uc = u.clone();
    for i in 0..grid.nr {
        let inv = 1.0 / grid.rhat[i];
        uc.row_mut(i).scaled_add(inv, &pot.phi_theta.row(i));
    }
    (uc, v - &pot.phi_r)
}

/// Discrete curl `(r̂V̌)_r - Ǔ_θ` with five-point differences.
pub fn discrete_curl(uc: &Array2<f64>, vc: &Array2<f64>, grid: &Grid) -> Array2<f64> {
    let rv = Array2::from_shape_fn(vc.dim(), |(i, j)| grid.rhat[i] * vc[[i, j]]);
    fd::dr_fourth(&rv, grid.dr) - fd::dtheta_fourth(uc, grid.dtheta)
}

/// Curl potential and the discrepancy between the two integration paths.
#[derive(Debug, Clone)]
pub struct CurlPotential {
    pub psi: Array2<f64>,
    pub path_gap: f64,
    pub max_curl: f64,
}

/// `ψ_r = Ǔ`, `ψ_θ = r̂V̌`, `ψ(0, -θ0) = 0`; integrates along `r` on the lower wall, then in `θ`.
pub fn curl_potential(uc: &Array2<f64>, vc: &Array2<f64>, grid: &Grid, tol: f64) -> Result<CurlPotential> {
    grid.check_field(uc)?;
    grid.check_field(vc)?;
    let max_curl = discrete_curl(uc, vc, grid).iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(max_curl <= tol) {
        return Err(Error::NotIntegrable { curl: max_curl, tol });
    }
    let rv = Array2::from_shape_fn(vc.dim(), |(i, j)| grid.rhat[i] * vc[[i, j]]);
    let wall = quad::cumulative_quartic(uc.column(0), grid.dr);
    let mut psi = grid.zeros();
    for i in 0..grid.nr {
        let line = quad::cumulative_quartic(rv.row(i), grid.dtheta);
        psi.row_mut(i).assign(&(line + wall[i]));
    }
    // θ first along the entrance, then r
    let inlet = quad::cumulative_quartic(rv.row(0), grid.dtheta);
    let mut gap = 0.0f64;
    for j in 0..grid.ntheta {
        let ray = quad::cumulative_quartic(uc.column(j), grid.dr);
        for i in 0..grid.nr {
            gap = gap.max((inlet[j] + ray[i] - psi[[i, j]]).abs());
        }
    }
    Ok(CurlPotential { psi, path_gap: gap, max_curl })
}

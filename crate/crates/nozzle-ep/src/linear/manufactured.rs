//! Manufactured single-mode solutions of the background-coefficient mode system.

use ndarray::{Array1, Array2};

use super::coeffs::{assemble_bar_coefficients, BarCoefficients};
use super::galerkin::{energy_estimate_ratio, solve_spectral_bvp, synthesize_solution, SpectralBVP};
use crate::background::integrate_background;
use crate::domain::{norms, BasisKind, CosineBasis, GasConfig, Grid, InletState, NozzleGeometry};
use crate::error::{Error, Result};

/// Exact radial profiles placed on one cosine mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Manufactured {
    /// `ϑ = r²`, `ν = (R - r)²`. Second-order differences are exact on it.
    Quadratic,
    /// `ϑ = r² e^{αr}`, `ν = (R - r)² e^{αr}`.
    Modulated { alpha: f64 },
}

impl Manufactured {
    /// `(f, f', f'')` of `ϑ` at `r`.
    pub fn theta(&self, r: f64) -> [f64; 3] {
        let q = [r * r, 2.0 * r, 2.0];
        self.modulate(q, r)
    }

    /// `(f, f', f'')` of `ν` at `r` on depth `depth`.
    pub fn nu(&self, r: f64, depth: f64) -> [f64; 3] {
        let s = depth - r;
        let q = [s * s, -2.0 * s, 2.0];
        self.modulate(q, r)
    }

    fn modulate(&self, q: [f64; 3], r: f64) -> [f64; 3] {
        match *self {
            Manufactured::Quadratic => q,
            Manufactured::Modulated { alpha } => {
                let e = (alpha * r).exp();
                [e * q[0], e * (q[1] + alpha * q[0]), e * (q[2] + 2.0 * alpha * q[1] + alpha * alpha * q[0])]
            }
        }
    }
}

/// Errors of one manufactured solve.
#[derive(Debug, Clone, PartialEq)]
pub struct ManufacturedRun {
    pub nr: usize,
    /// Discrete `H¹` error of `(φ, Ψ)`.
    pub error_h1: f64,
    pub energy_ratio: f64,
}

/// Mode system with sources and boundary values taken from `pair` on mode `mode`.
pub fn manufactured_bvp(pair: Manufactured, bar: &BarCoefficients, basis: &CosineBasis, grid: &Grid, mode: usize) -> Result<SpectralBVP> {
    if mode > basis.m {
        return Err(Error::param("mode", format!("{mode} > m = {}", basis.m)));
    }
    let nm = basis.len();
    let depth = grid.r[grid.nr - 1];
    let lam = basis.eigenvalue(mode);
    let mut f1 = Array2::zeros((grid.nr, nm));
    let mut f2 = Array2::zeros((grid.nr, nm));
    for i in 0..grid.nr {
        let r = grid.r[i];
        let rh = bar.rhat[i];
        let t = pair.theta(r);
        let n = pair.nu(r, depth);
        f1[[i, mode]] = bar.a11[i] * t[2] - lam * bar.a22[i] * t[0] + bar.a1[i] * t[1] + bar.b2[i] * n[1] + bar.b1[i] * n[0];
        f2[[i, mode]] = n[2] - n[1] / rh - lam * n[0] / (rh * rh) + bar.c2[i] * n[0] + bar.c1[i] * t[1];
    }
    let mut g = Array1::zeros(nm);
    g[mode] = pair.theta(0.0)[1];
    let mut bvp = SpectralBVP::from_background(bar, basis, grid.dr, f1, f2, g);
    bvp.theta_entry[mode] = pair.theta(0.0)[0];
    bvp.nu_slope_entry[mode] = pair.nu(0.0, depth)[1];
    bvp.nu_exit[mode] = pair.nu(depth, depth)[0];
    Ok(bvp)
}

/// Solve the manufactured problem and measure the recovery error and energy ratio.
pub fn manufactured_run(pair: Manufactured, bar: &BarCoefficients, basis: &CosineBasis, grid: &Grid, mode: usize) -> Result<ManufacturedRun> {
    let bvp = manufactured_bvp(pair, bar, basis, grid, mode)?;
    let (theta, nu) = solve_spectral_bvp(&bvp)?;
    let (phi, psi) = synthesize_solution(&theta, &nu, basis, grid);
    let depth = grid.r[grid.nr - 1];
    let eta = Array1::from_shape_fn(grid.ntheta, |j| basis.eta(mode, grid.theta[j]));
    let exact_phi = Array2::from_shape_fn((grid.nr, grid.ntheta), |(i, j)| pair.theta(grid.r[i])[0] * eta[j]);
    let exact_psi = Array2::from_shape_fn((grid.nr, grid.ntheta), |(i, j)| pair.nu(grid.r[i], depth)[0] * eta[j]);
    let ep = norms::discrete_norm(&(&phi - &exact_phi), grid, 1)?;
    let es = norms::discrete_norm(&(&psi - &exact_psi), grid, 1)?;
    let field = |f: &Array2<f64>| Array2::from_shape_fn((grid.nr, grid.ntheta), |(i, j)| f[[i, mode]] * eta[j]);
    let g = &eta * bvp.g[mode];
    let energy_ratio = energy_estimate_ratio(&phi, &psi, &field(&bvp.f1), &field(&bvp.f2), &g, grid, None)?;
    Ok(ManufacturedRun { nr: grid.nr, error_h1: (ep * ep + es * es).sqrt(), energy_ratio })
}

/// Manufactured runs over a sequence of radial resolutions with the angular grid fixed at
/// `8m + 1` nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ManufacturedStudy {
    pub runs: Vec<ManufacturedRun>,
    /// `log2(e_k / e_{k+1})` for consecutive runs.
    pub orders: Vec<f64>,
}

impl ManufacturedStudy {
    pub fn min_order(&self) -> f64 {
        self.orders.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Relative change of the energy ratio between the two finest runs.
    pub fn energy_variation(&self) -> f64 {
        match self.runs.as_slice() {
            [.., a, b] => (b.energy_ratio - a.energy_ratio).abs() / a.energy_ratio.abs(),
            _ => f64::NAN,
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn manufactured_study(
    pair: Manufactured,
    gas: &GasConfig,
    inlet: &InletState,
    geo: &NozzleGeometry,
    m: usize,
    kind: BasisKind,
    nrs: &[usize],
    mode: usize,
) -> Result<ManufacturedStudy> {
    let basis = CosineBasis::with_kind(geo.theta0, m, kind);
    let mut runs = Vec::with_capacity(nrs.len());
    for &nr in nrs {
        let bg = integrate_background(gas, inlet, geo, nr)?;
        let bar = assemble_bar_coefficients(&bg)?;
        let grid = Grid::new(geo, nr, 8 * m + 1)?;
        runs.push(manufactured_run(pair, &bar, &basis, &grid, mode)?);
    }
    let orders = runs.windows(2).map(|w| (w[0].error_h1 / w[1].error_h1).log2()).collect();
    Ok(ManufacturedStudy { runs, orders })
}

//! Cosine-Galerkin reduction of the potential-form system and its collocation solve in `r`.
//!
//! Unknowns per radial node are `ϑ_0..ϑ_m, ν_0..ν_m`; the `ϑ` family is an initial-value
//! problem marched from the entrance, the `ν` family a two-point problem.

use ndarray::{Array1, Array2, Array3, ArrayView1};

use super::banded::BandMatrix;
use super::coeffs::{BarCoefficients, StateCoefficients};
use crate::domain::{fd, norms, CosineBasis, Grid};
use crate::error::{Error, Result};

/// Projected mode system.
#[derive(Debug, Clone)]
pub struct SpectralBVP {
    pub m: usize,
    pub nr: usize,
    pub dr: f64,
    /// `[i, k, j] = ⟨a11 η_j, η_k⟩`.
    pub a11: Array3<f64>,
    /// `[i, k, j] = ⟨2 a12 η_j', η_k⟩`.
    pub a12: Array3<f64>,
    /// `[i, k, j] = ⟨a22 η_j, η_k⟩`.
    pub a22: Array3<f64>,
    /// `[i, k, j] = ⟨a2 η_j', η_k⟩`.
    pub a2: Array3<f64>,
    pub abar1: Array1<f64>,
    pub b1: Array1<f64>,
    pub b2: Array1<f64>,
    pub c1: Array1<f64>,
    pub c2: Array1<f64>,
    pub rhat: Array1<f64>,
    pub eig: Array1<f64>,
    /// `[i, k] = ⟨F1(r_i, ·), η_k⟩`.
    pub f1: Array2<f64>,
    pub f2: Array2<f64>,
    /// `ϑ_k'(0)`.
    pub g: Array1<f64>,
    /// `ϑ_k(0)`; zero for the homogenized problem.
    pub theta_entry: Array1<f64>,
    /// `ν_k'(0)`; zero for the homogenized problem.
    pub nu_slope_entry: Array1<f64>,
    /// `ν_k(R)`; zero for the homogenized problem.
    pub nu_exit: Array1<f64>,
    /// Largest one-sided `|∂_θ F|` at the walls, relative to `max(1, max|F|)`.
    pub wall_slope: f64,
}

fn project_rows(f: &Array2<f64>, tab: &Array2<f64>, h: f64) -> Array2<f64> {
    let (nr, _) = f.dim();
    let nm = tab.nrows();
    Array2::from_shape_fn((nr, nm), |(i, k)| crate::domain::quad::dot_trap(f.row(i), tab.row(k), h))
}

impl SpectralBVP {
    /// Mode system with background coefficients only; sources given per mode.
    pub fn from_background(bar: &BarCoefficients, basis: &CosineBasis, dr: f64, f1: Array2<f64>, f2: Array2<f64>, g: Array1<f64>) -> Self {
        let nr = bar.a11.len();
        let nm = basis.len();
        let mut a11 = Array3::zeros((nr, nm, nm));
        let mut a22 = Array3::zeros((nr, nm, nm));
        for i in 0..nr {
            for k in 0..nm {
                a11[[i, k, k]] = bar.a11[i];
                a22[[i, k, k]] = bar.a22[i];
            }
        }
        Self {
            m: basis.m,
            nr,
            dr,
            a11,
            a12: Array3::zeros((nr, nm, nm)),
            a22,
            a2: Array3::zeros((nr, nm, nm)),
            abar1: bar.a1.clone(),
            b1: bar.b1.clone(),
            b2: bar.b2.clone(),
            c1: bar.c1.clone(),
            c2: bar.c2.clone(),
            rhat: bar.rhat.clone(),
            eig: Array1::from_shape_fn(nm, |k| basis.eigenvalue(k)),
            f1,
            f2,
            g,
            theta_entry: Array1::zeros(nm),
            nu_slope_entry: Array1::zeros(nm),
            nu_exit: Array1::zeros(nm),
            wall_slope: 0.0,
        }
    }
}

pub fn galerkin_reduce(
    state: &StateCoefficients,
    bar: &BarCoefficients,
    f1: &Array2<f64>,
    f2: &Array2<f64>,
    g: ArrayView1<f64>,
    basis: &CosineBasis,
    grid: &Grid,
) -> Result<SpectralBVP> {
    basis.check_aliasing(grid.ntheta)?;
    grid.check_field(f1)?;
    grid.check_field(f2)?;
    let tab = basis.table(&grid.theta);
    let dtab = basis.dtable(&grid.theta);
    let nm = basis.len();
    let (nr, nt) = (grid.nr, grid.ntheta);
    let w = crate::domain::quad::trapezoid_weights(nt, grid.dtheta);
    let mut a11 = Array3::zeros((nr, nm, nm));
    let mut a12 = Array3::zeros((nr, nm, nm));
    let mut a22 = Array3::zeros((nr, nm, nm));
    let mut a2 = Array3::zeros((nr, nm, nm));
    let mut wk = vec![0.0; nt];
    for i in 0..nr {
        for k in 0..nm {
            for jt in 0..nt {
                wk[jt] = w[jt] * tab[[k, jt]];
            }
            for j in 0..nm {
                let (mut s11, mut s12, mut s22, mut s2) = (0.0, 0.0, 0.0, 0.0);
                for jt in 0..nt {
                    let e = tab[[j, jt]] * wk[jt];
                    let de = dtab[[j, jt]] * wk[jt];
                    s11 += state.a11[[i, jt]] * e;
                    s22 += state.a22[[i, jt]] * e;
                    s12 += 2.0 * state.a12[[i, jt]] * de;
                    s2 += state.a2[[i, jt]] * de;
                }
                a11[[i, k, j]] = s11;
                a12[[i, k, j]] = s12;
                a22[[i, k, j]] = s22;
                a2[[i, k, j]] = s2;
            }
        }
    }
    let wall_slope = wall_slope(f1, grid).max(wall_slope(f2, grid));
    let gk = basis.project(g, grid)?;
    Ok(SpectralBVP {
        m: basis.m,
        nr,
        dr: grid.dr,
        a11,
        a12,
        a22,
        a2,
        abar1: bar.a1.clone(),
        b1: bar.b1.clone(),
        b2: bar.b2.clone(),
        c1: bar.c1.clone(),
        c2: bar.c2.clone(),
        rhat: grid.rhat.clone(),
        eig: Array1::from_shape_fn(nm, |k| basis.eigenvalue(k)),
        f1: project_rows(f1, &tab, grid.dtheta),
        f2: project_rows(f2, &tab, grid.dtheta),
        g: gk,
        theta_entry: Array1::zeros(nm),
        nu_slope_entry: Array1::zeros(nm),
        nu_exit: Array1::zeros(nm),
        wall_slope,
    })
}

fn wall_slope(f: &Array2<f64>, grid: &Grid) -> f64 {
    let ft = fd::dtheta(f, grid.dtheta);
    let scale = f.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let last = grid.ntheta - 1;
    let mut s = 0.0f64;
    for i in 0..grid.nr {
        s = s.max(ft[[i, 0]].abs()).max(ft[[i, last]].abs());
    }
    s / scale
}

/// Band half-widths for block size `b = 2(m+1)` under the row layout of `solve_spectral_bvp`.
fn bandwidths(m: usize) -> (usize, usize) {
    let b = 2 * (m + 1);
    (2 * b + m, 2 * b)
}

/// Collocate both mode families on the radial grid and solve the global band system.
/// Returns `(ϑ, ν)`, each indexed `[i_r, k]`.
pub fn solve_spectral_bvp(bvp: &SpectralBVP) -> Result<(Array2<f64>, Array2<f64>)> {
    let nr = bvp.nr;
    if nr < 3 {
        return Err(Error::param("nr", format!("{nr} < 3")));
    }
    let nm = bvp.m + 1;
    let b = 2 * nm;
    let n = b * nr;
    let (kl, ku) = bandwidths(bvp.m);
    let mut a = BandMatrix::zeros(n, kl, ku);
    let mut rhs = vec![0.0; n];
    let h = bvp.dr;
    let d2 = 1.0 / (h * h);
    let d1 = 0.5 / h;
    let th = |i: usize, k: usize| i * b + k;
    let nu = |i: usize, k: usize| i * b + nm + k;

    for k in 0..nm {
        // entrance: ϑ_k(0), ν_k'(0) on block 0; ϑ_k'(0) on block 1
        a.add(th(0, k), th(0, k), 1.0);
        rhs[th(0, k)] = bvp.theta_entry[k];
        a.add(nu(0, k), nu(0, k), -3.0 * d1);
        a.add(nu(0, k), nu(1, k), 4.0 * d1);
        a.add(nu(0, k), nu(2, k), -d1);
        rhs[nu(0, k)] = bvp.nu_slope_entry[k];
        a.add(th(1, k), th(0, k), -3.0 * d1);
        a.add(th(1, k), th(1, k), 4.0 * d1);
        a.add(th(1, k), th(2, k), -d1);
        rhs[th(1, k)] = bvp.g[k];
        // exit: ν_k(R)
        a.add(nu(nr - 1, k), nu(nr - 1, k), 1.0);
        rhs[nu(nr - 1, k)] = bvp.nu_exit[k];
    }

    for i in 1..nr - 1 {
        let row_block = i + 1;
        let rh = bvp.rhat[i];
        for k in 0..nm {
            // hyperbolic family collocated at node i, stored on block i+1
            let row = th(row_block, k);
            for j in 0..nm {
                let c11 = bvp.a11[[i, k, j]];
                let c12 = bvp.a12[[i, k, j]];
                let c0 = -bvp.eig[j] * bvp.a22[[i, k, j]] + bvp.a2[[i, k, j]];
                a.add(row, th(i + 1, j), c11 * d2 + c12 * d1);
                a.add(row, th(i, j), -2.0 * c11 * d2 + c0);
                a.add(row, th(i - 1, j), c11 * d2 - c12 * d1);
            }
            a.add(row, th(i + 1, k), bvp.abar1[i] * d1);
            a.add(row, th(i - 1, k), -bvp.abar1[i] * d1);
            a.add(row, nu(i + 1, k), bvp.b2[i] * d1);
            a.add(row, nu(i - 1, k), -bvp.b2[i] * d1);
            a.add(row, nu(i, k), bvp.b1[i]);
            rhs[row] = bvp.f1[[i, k]];

            // elliptic family collocated at node i
            let row = nu(i, k);
            let lam = bvp.eig[k];
            a.add(row, nu(i + 1, k), d2 - d1 / rh);
            a.add(row, nu(i, k), -2.0 * d2 - lam / (rh * rh) + bvp.c2[i]);
            a.add(row, nu(i - 1, k), d2 + d1 / rh);
            a.add(row, th(i + 1, k), bvp.c1[i] * d1);
            a.add(row, th(i - 1, k), -bvp.c1[i] * d1);
            rhs[row] = bvp.f2[[i, k]];
        }
    }

    let lu = a.factor()?;
    lu.solve(&mut rhs);
    let theta = Array2::from_shape_fn((nr, nm), |(i, k)| rhs[th(i, k)]);
    let nuv = Array2::from_shape_fn((nr, nm), |(i, k)| rhs[nu(i, k)]);
    Ok((theta, nuv))
}

/// `φ(r_i, θ_j) = Σ ϑ_k(r_i) η_k(θ_j)` and likewise `Ψ` from `ν`.
pub fn synthesize_solution(theta: &Array2<f64>, nu: &Array2<f64>, basis: &CosineBasis, grid: &Grid) -> (Array2<f64>, Array2<f64>) {
    let tab = basis.table(&grid.theta);
    (theta.dot(&tab), nu.dot(&tab))
}

/// `‖(φ,Ψ)‖_{H¹} / (‖F1‖_{L²} + ‖F2‖_{L²} + ‖g‖_{L²(Γ)})`. The multiplier is accepted for
/// reference but does not enter the ratio.
pub fn energy_estimate_ratio(
    phi: &Array2<f64>,
    psi: &Array2<f64>,
    f1: &Array2<f64>,
    f2: &Array2<f64>,
    g: &Array1<f64>,
    grid: &Grid,
    _multiplier: Option<&super::multiplier::MultiplierG>,
) -> Result<f64> {
    let den = norms::l2(f1, grid) + norms::l2(f2, grid) + norms::l2_theta(g, grid.dtheta);
    if !(den > 0.0) {
        return Err(Error::UndefinedRatio);
    }
    let a = norms::discrete_norm(phi, grid, 1)?;
    let b = norms::discrete_norm(psi, grid, 1)?;
    Ok((a * a + b * b).sqrt() / den)
}

//! Linearized coefficients about the background and about a frozen perturbation state.

use ndarray::{Array1, Array2};

use crate::background::BackgroundSolution;
use crate::domain::{fd, GasConfig, Grid};
use crate::error::{Error, Result};
use crate::state::PerturbationState;

/// Radial coefficient profiles of the operators linearized about the background.
#[derive(Debug, Clone)]
pub struct BarCoefficients {
    pub a1: Array1<f64>,
    pub b1: Array1<f64>,
    pub b2: Array1<f64>,
    pub c1: Array1<f64>,
    pub c2: Array1<f64>,
    /// `1 - Ū²/c̄²`.
    pub a11: Array1<f64>,
    /// `1/r̂²`.
    pub a22: Array1<f64>,
    /// `dā11/dr`.
    pub da11: Array1<f64>,
    pub rhat: Array1<f64>,
    pub report: BarReport,
}

/// Sign conditions on the background coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct BarReport {
    /// `ā11 < 0` at every node.
    pub supersonic: bool,
    /// Largest `μ0'` with `-1/μ0' ≤ ā11 ≤ -μ0'`; zero or negative when violated.
    pub mu0_prime: f64,
    pub c1_positive: bool,
    pub c2_negative: bool,
}

pub fn assemble_bar_coefficients(bg: &BackgroundSolution) -> Result<BarCoefficients> {
    if let Some(i) = bg.csq.iter().position(|c| !(*c > 0.0)) {
        return Err(Error::InvalidBackground(format!("c^2 <= 0 at node {i}")));
    }
    let g = bg.gamma;
    let n = bg.len();
    let mut out = BarCoefficients {
        a1: Array1::zeros(n),
        b1: Array1::zeros(n),
        b2: Array1::zeros(n),
        c1: Array1::zeros(n),
        c2: Array1::zeros(n),
        a11: Array1::zeros(n),
        a22: Array1::zeros(n),
        da11: Array1::zeros(n),
        rhat: bg.rhat.clone(),
        report: BarReport { supersonic: true, mu0_prime: 0.0, c1_positive: true, c2_negative: true },
    };
    for i in 0..n {
        let (u, du, c, rh, rho, e) = (bg.u[i], bg.du[i], bg.csq[i], bg.rhat[i], bg.rho[i], bg.e[i]);
        out.a1[i] = ((g - 1.0) * u * u - c) / (rh * c) - ((g + 1.0) * u * du + e) / c;
        out.b1[i] = -(g - 1.0) * u / (rh * c) + (g - 1.0) * du / c;
        out.b2[i] = u / c;
        out.c1[i] = rho * u / c;
        out.c2[i] = -rho / c;
        out.a11[i] = 1.0 - u * u / c;
        out.a22[i] = 1.0 / (rh * rh);
        out.da11[i] = -bg.dmsq[i];
    }
    let amax = out.a11.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v));
    let amin = out.a11.iter().fold(f64::INFINITY, |m, v| m.min(*v));
    out.report.supersonic = amax < 0.0;
    out.report.mu0_prime = if amax < 0.0 { (-amax).min(-1.0 / amin) } else { amax.min(0.0) };
    out.report.c1_positive = out.c1.iter().all(|v| *v > 0.0);
    out.report.c2_negative = out.c2.iter().all(|v| *v < 0.0);
    Ok(out)
}

/// Coefficients of the potential-form operator frozen at a perturbation state, together with
/// the hatted velocity-form coefficients they derive from.
#[derive(Debug, Clone)]
pub struct StateCoefficients {
    pub a11: Array2<f64>,
    pub a12: Array2<f64>,
    pub a22: Array2<f64>,
    pub a2: Array2<f64>,
    /// `â21 = -UV/c̄²`.
    pub ah21: Array2<f64>,
    /// `â22 = (c² - V²)/(r̂c̄²)`.
    pub ah22: Array2<f64>,
    /// Sound speed squared of the frozen state.
    pub csq: Array2<f64>,
    pub report: StateReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateReport {
    /// `κ0` with `-1/κ0 ≤ a11 ≤ -κ0`.
    pub kappa0: f64,
    /// `κ1` with `κ1 ≤ a22 ≤ 1/κ1`.
    pub kappa1: f64,
    /// Max-norm deviations `(a11 - ā11, a12, a2, a22 - ā22)`.
    pub deviation: [f64; 4],
}

/// `c²(𝒦, U, V, Φ) = (γ-1)(Φ - (U²+V²)/2 + 𝒦)`.
#[inline]
pub fn sound_speed_sq(gamma: f64, k: f64, u: f64, v: f64, phi: f64) -> f64 {
    (gamma - 1.0) * (phi - 0.5 * (u * u + v * v) + k)
}

/// `(A11, A22, A12, A21) / c̄²` evaluated directly from a pointwise state.
pub fn hatted_coefficients(u: f64, v: f64, csq: f64, csq_bar: f64, rhat: f64) -> (f64, f64, f64, f64) {
    (
        (csq - u * u) / csq_bar,
        (csq - v * v) / (rhat * csq_bar),
        -u * v / (rhat * csq_bar),
        -u * v / csq_bar,
    )
}

pub fn assemble_state_coefficients(
    bg: &BackgroundSolution,
    bar: &BarCoefficients,
    frozen: &PerturbationState,
    grid: &Grid,
    gas: &GasConfig,
) -> Result<StateCoefficients> {
    let (nr, nt) = (grid.nr, grid.ntheta);
    let g = gas.gamma;
    let mut a11 = Array2::zeros((nr, nt));
    let mut a12 = Array2::zeros((nr, nt));
    let mut a22 = Array2::zeros((nr, nt));
    let mut a2 = Array2::zeros((nr, nt));
    let mut ah21 = Array2::zeros((nr, nt));
    let mut ah22 = Array2::zeros((nr, nt));
    let mut csq = Array2::zeros((nr, nt));
    let mut dev = [0.0f64; 4];
    for i in 0..nr {
        let rh = grid.rhat[i];
        let cb = bg.csq[i];
        let ub = bg.u[i];
        let c0 = sound_speed_sq(g, 0.0, ub, 0.0, bg.phi[i]);
        for j in 0..nt {
            let u = ub + frozen.u[[i, j]];
            let v = frozen.v[[i, j]];
            let c = sound_speed_sq(g, frozen.k[[i, j]], u, v, bg.phi[i] + frozen.phi[[i, j]]);
            if !(c > 0.0) {
                return Err(Error::Vacuum { i, j, value: c });
            }
            csq[[i, j]] = c;
            let dc = c - c0;
            // background value plus increment, so a zero state reproduces ā exactly
            let h11 = bar.a11[i] + (dc - (u * u - ub * ub)) / cb;
            let h22 = 1.0 / rh + (dc - v * v) / (rh * cb);
            let h12 = -u * v / (rh * cb);
            a11[[i, j]] = h11;
            a12[[i, j]] = h12;
            a22[[i, j]] = h22 / rh;
            a2[[i, j]] = h12 / rh;
            ah21[[i, j]] = -u * v / cb;
            ah22[[i, j]] = h22;
            dev[0] = dev[0].max((h11 - bar.a11[i]).abs());
            dev[1] = dev[1].max(h12.abs());
            dev[2] = dev[2].max((h12 / rh).abs());
            dev[3] = dev[3].max((h22 / rh - bar.a22[i]).abs());
        }
    }
    let (amin, amax) = minmax(&a11);
    let (bmin, bmax) = minmax(&a22);
    let kappa0 = if amax < 0.0 { (-amax).min(-1.0 / amin) } else { amax.min(0.0) };
    let kappa1 = if bmin > 0.0 { bmin.min(1.0 / bmax) } else { bmin };
    Ok(StateCoefficients { a11, a12, a22, a2, ah21, ah22, csq, report: StateReport { kappa0, kappa1, deviation: dev } })
}

impl StateCoefficients {
    /// `∂_r a11`, `∂_θ a12`, `∂_r a22` by finite differences on the grid.
    pub fn derivatives(&self, grid: &Grid) -> (Array2<f64>, Array2<f64>, Array2<f64>) {
        (fd::dr(&self.a11, grid.dr), fd::dtheta(&self.a12, grid.dtheta), fd::dr(&self.a22, grid.dr))
    }
}

pub(crate) fn minmax(a: &Array2<f64>) -> (f64, f64) {
    a.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)))
}

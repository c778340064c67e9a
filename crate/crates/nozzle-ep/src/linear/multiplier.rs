//! Energy multiplier `G(r)` solving `-G' + 2pG - qG² - h = λ0` in closed form.

use std::f64::consts::FRAC_PI_2;

use ndarray::{Array1, Array2};

use super::coeffs::{BarCoefficients, StateCoefficients};
use crate::domain::{fd, Grid};
use crate::error::{Error, Result};

/// Branch of the closed-form solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Branch {
    /// `G = χ tan(π/2 - λ0 - qχr) + p/q`.
    Tan { chi: f64 },
    /// `G = √ξ cot(ϕ + q√ξ r) + p/q` with phase `ϕ = ξ mod π`.
    Cot { xi: f64, phase: f64 },
}

/// Riccati data `(p, q, h)` and the small constants entering them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiccatiData {
    pub p: f64,
    pub q: f64,
    pub h: f64,
}

#[derive(Debug, Clone)]
pub struct MultiplierG {
    pub lambda0: f64,
    pub data: RiccatiData,
    pub branch: Branch,
    /// Sample radii on `[0, R]`.
    pub r: Array1<f64>,
    pub g: Array1<f64>,
    pub rbar: f64,
}

/// Tunables for the multiplier constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiplierConfig {
    pub lambda0: f64,
    pub k_star: f64,
    pub delta1: f64,
    /// Number of samples of `G` on `[0, R]`.
    pub samples: usize,
}

impl Default for MultiplierConfig {
    fn default() -> Self {
        Self { lambda0: 0.1, k_star: 1e-2, delta1: 1e-2, samples: 257 }
    }
}

impl MultiplierG {
    /// Closed-form value at `r`.
    pub fn eval(&self, r: f64) -> f64 {
        let RiccatiData { p, q, .. } = self.data;
        match self.branch {
            Branch::Tan { chi } => chi * (FRAC_PI_2 - self.lambda0 - q * chi * r).tan() + p / q,
            Branch::Cot { xi, phase } => {
                let s = xi.sqrt();
                s / (phase + q * s * r).tan() + p / q
            }
        }
    }

    /// Closed-form derivative at `r`.
    pub fn deriv(&self, r: f64) -> f64 {
        let RiccatiData { q, .. } = self.data;
        match self.branch {
            Branch::Tan { chi } => {
                let t = (FRAC_PI_2 - self.lambda0 - q * chi * r).tan();
                -q * chi * chi * (1.0 + t * t)
            }
            Branch::Cot { xi, phase } => {
                let c = 1.0 / (phase + q * xi.sqrt() * r).tan();
                -q * xi * (1.0 + c * c)
            }
        }
    }

    /// `max |-G' + 2pG - qG² - h - λ0|` over interior samples, `G'` by eighth-order centered
    /// differences of the closed form with the sample spacing as step.
    pub fn riccati_residual(&self) -> f64 {
        const W: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
        let RiccatiData { p, q, h } = self.data;
        let dr = self.r[1] - self.r[0];
        let n = self.g.len();
        (1..n - 1)
            .map(|i| {
                let r = self.r[i];
                let dg = W.iter().enumerate().map(|(k, w)| {
                    let s = (k + 1) as f64 * dr;
                    w * (self.eval(r + s) - self.eval(r - s))
                });
                let dg = dg.sum::<f64>() / dr;
                let g = self.g[i];
                (-dg + 2.0 * p * g - q * g * g - h - self.lambda0).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.g.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Closed-form multiplier for given Riccati data, sampled on `[0, depth]`.
pub fn riccati_multiplier(data: RiccatiData, lambda0: f64, depth: f64, samples: usize) -> Result<MultiplierG> {
    let RiccatiData { p, q, h } = data;
    if !(q > 0.0) || !(h > 0.0) || !p.is_finite() {
        return Err(Error::MultiplierData(format!("need q > 0 and h > 0, got p = {p}, q = {q}, h = {h}")));
    }
    if !(lambda0 > 0.0 && lambda0 < FRAC_PI_2) {
        return Err(Error::param("lambda0", format!("{lambda0} not in (0, pi/2)")));
    }
    if samples < 5 {
        return Err(Error::param("samples", format!("{samples} < 5")));
    }
    let disc = h * q - p * p;
    // near the branch switch both formulas coincide; use tan with the p² term dropped
    let data = if disc.abs() < 1e-12 { RiccatiData { p: 0.0, q, h } } else { data };
    let p = data.p;
    let (branch, rbar) = if disc > -1e-12 {
        let chi = ((h + lambda0) * q - p * p).sqrt() / q;
        (Branch::Tan { chi }, (FRAC_PI_2 - lambda0 - (p.abs() / (q * chi)).atan()) / (q * chi))
    } else {
        let zstar = -disc / q;
        if !(lambda0 > zstar) {
            return Err(Error::SlackTooSmall { lambda0, zstar });
        }
        let xi = (lambda0 - zstar) / q;
        let phase = xi.rem_euclid(std::f64::consts::PI);
        if phase == 0.0 {
            return Err(Error::MultiplierData("cot phase is a multiple of pi".into()));
        }
        let s = xi.sqrt();
        // arccot on (0, π)
        let arccot = FRAC_PI_2 - (-p / (q * s)).atan();
        (Branch::Cot { xi, phase }, (arccot - phase) / (q * s))
    };
    if !(depth < rbar) {
        return Err(Error::DomainTooDeep { rbar, depth });
    }
    let r = Array1::linspace(0.0, depth, samples);
    let mut out = MultiplierG { lambda0, data, branch, r, g: Array1::zeros(samples), rbar };
    out.g = out.r.mapv(|x| out.eval(x));
    if !(out.min_value() > 0.0) {
        return Err(Error::MultiplierData(format!("G not positive on [0, {depth}]")));
    }
    Ok(out)
}

/// `(p, q, h)` from background and frozen-state coefficients. `mu` is the positivity floor
/// `min h(r)` of the background.
pub fn multiplier_constants(bar: &BarCoefficients, state: &StateCoefficients, grid: &Grid, mu: f64, cfg: &MultiplierConfig) -> Result<RiccatiData> {
    if !(mu > 0.0) {
        return Err(Error::MultiplierData(format!("positivity floor mu = {mu} <= 0")));
    }
    let kappa0 = state.report.kappa0;
    let kappa1 = state.report.kappa1;
    if !(kappa0 > 0.0) || !(kappa1 > 0.0) {
        return Err(Error::MultiplierData(format!("kappa0 = {kappa0}, kappa1 = {kappa1}")));
    }
    let kd = cfg.k_star * cfg.delta1;
    let n = bar.a11.len();
    let mut hmax = 0.0f64;
    let mut qmax = 0.0f64;
    let mut pbar = f64::INFINITY;
    let da22 = fd::d1(bar.a22.view(), grid.dr);
    for i in 0..n {
        hmax = hmax.max(4.0 * bar.c1[i] * bar.c1[i] / (kappa0 * mu));
        qmax = qmax.max(4.0 / kappa0 * (bar.b2[i].powi(2) + bar.b1[i].powi(2) / mu + kd / 8.0));
        let p1 = -bar.da11[i] / (2.0 * bar.a11[i]) + bar.a1[i] / bar.a11[i];
        let p2 = -da22[i] / (2.0 * bar.a22[i]);
        pbar = pbar.min(p1).min(p2);
    }
    let (da11, dta12, da22s) = state.derivatives(grid);
    let mut pstate = f64::INFINITY;
    for i in 0..grid.nr {
        for j in 0..grid.ntheta {
            let a11 = state.a11[[i, j]];
            let a22 = state.a22[[i, j]];
            let p1 = -da11[[i, j]] / (2.0 * a11) - dta12[[i, j]] / a11 + bar.a1[i] / a11;
            let p2 = -da22s[[i, j]] / (2.0 * a22);
            pstate = pstate.min(p1).min(p2);
        }
    }
    Ok(RiccatiData { p: pbar.min(pstate), q: qmax, h: 2.0 * kd / kappa1 + hmax })
}

/// Constants, closed form and depth check in one call.
pub fn build_multiplier(bar: &BarCoefficients, state: &StateCoefficients, grid: &Grid, mu: f64, cfg: &MultiplierConfig) -> Result<MultiplierG> {
    let data = multiplier_constants(bar, state, grid, mu, cfg)?;
    let depth = grid.r[grid.nr - 1];
    riccati_multiplier(data, cfg.lambda0, depth, cfg.samples)
}

/// Pointwise energy conditions: `-(2/a11)(q1 - q3)` and `(2/a22)(q2 - K*δ1)` on the grid, with
/// `G` and `G'` in closed form.
pub fn energy_conditions(
    g: &MultiplierG,
    bar: &BarCoefficients,
    state: &StateCoefficients,
    grid: &Grid,
    mu: f64,
    cfg: &MultiplierConfig,
) -> (Array2<f64>, Array2<f64>) {
    let kd = cfg.k_star * cfg.delta1;
    let (da11, dta12, da22) = state.derivatives(grid);
    let mut c2 = grid.zeros();
    let mut c3 = grid.zeros();
    for i in 0..grid.nr {
        let gv = g.eval(grid.r[i]);
        let gp = g.deriv(grid.r[i]);
        let q3 = 2.0 * ((bar.b2[i].powi(2) + bar.b1[i].powi(2) / mu + kd / 8.0) * gv * gv + bar.c1[i].powi(2) / mu);
        for j in 0..grid.ntheta {
            let a11 = state.a11[[i, j]];
            let a22 = state.a22[[i, j]];
            let q1 = 0.5 * (da11[[i, j]] * gv + a11 * gp) + dta12[[i, j]] * gv - bar.a1[i] * gv;
            let q2 = -0.5 * (da22[[i, j]] * gv + a22 * gp);
            c2[[i, j]] = -2.0 / a11 * (q1 - q3);
            c3[[i, j]] = 2.0 / a22 * (q2 - kd);
        }
    }
    (c2, c3)
}

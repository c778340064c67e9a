//! Radially symmetric supersonic background: an initial-value problem for `(M̄², r̂Ē)`
//! marched with fixed-step RK4, followed by reconstruction of the primitive profiles.

use ndarray::Array1;

use crate::domain::{GasConfig, InletState, NozzleGeometry};
use crate::error::{Error, Result};

/// Sampled background profiles on the uniform radial grid of `[0, R]`.
#[derive(Debug, Clone)]
pub struct BackgroundSolution {
    pub r: Array1<f64>,
    pub rhat: Array1<f64>,
    pub msq: Array1<f64>,
    pub e: Array1<f64>,
    pub rho: Array1<f64>,
    pub u: Array1<f64>,
    pub p: Array1<f64>,
    pub phi: Array1<f64>,
    pub csq: Array1<f64>,
    /// `B̄ = Ū²/2 + γP̄/((γ-1)ρ̄)`.
    pub bern: Array1<f64>,
    /// `dM̄²/dr`.
    pub dmsq: Array1<f64>,
    /// `dĒ/dr`.
    pub de: Array1<f64>,
    /// `dŪ/dr`.
    pub du: Array1<f64>,
    /// `dρ̄/dr`.
    pub drho: Array1<f64>,
    pub mu0: f64,
    pub gamma: f64,
    pub s0: f64,
    pub j0: f64,
    pub b0: f64,
    pub dr: f64,
}

impl BackgroundSolution {
    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// `max |r̂ρ̄Ū - J0| / J0`.
    pub fn mass_flux_error(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.len() {
            m = m.max((self.rhat[i] * self.rho[i] * self.u[i] - self.j0).abs() / self.j0);
        }
        m
    }

    /// `max |B̄ - Φ̄|`.
    pub fn bernoulli_gap(&self) -> f64 {
        (&self.bern - &self.phi).iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Nodewise strict increase of `M̄²`.
    pub fn msq_increasing(&self) -> bool {
        self.msq.windows(2).into_iter().all(|w| w[1] > w[0])
    }

    /// Largest gap between the two density routes `μ0(r̂²M̄²)^{-1/(γ+1)}` and `J0/(r̂Ū)`.
    pub fn density_route_gap(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.len() {
            let a = self.mu0 * (self.rhat[i].powi(2) * self.msq[i]).powf(-1.0 / (self.gamma + 1.0));
            let b = self.j0 / (self.rhat[i] * self.u[i]);
            m = m.max((a - b).abs() / a.abs());
        }
        m
    }

    /// `Φ̄' = -Ē`.
    pub fn dphi(&self) -> Array1<f64> {
        self.e.mapv(|e| -e)
    }
}

/// `μ0 = (J0²/(γe^{S0}))^{1/(γ+1)}`.
pub fn mu0(gas: &GasConfig, inlet: &InletState) -> f64 {
    let g = gas.gamma;
    (inlet.j0 * inlet.j0 / (g * inlet.s0.exp())).powf(1.0 / (g + 1.0))
}

/// Right-hand side `(dM̄²/dr, d(r̂Ē)/dr)` at radius `r` (measured from the entrance).
pub fn rhs(r: f64, msq: f64, re: f64, gas: &GasConfig, inlet: &InletState, geo: &NozzleGeometry) -> Result<(f64, f64)> {
    if !(msq > 0.0) {
        return Err(Error::Domain(format!("M^2 = {msq} <= 0 at r = {r}")));
    }
    let gap = (msq - 1.0).abs();
    if gap < 1e-8 {
        return Err(Error::SonicSingularity { r, gap });
    }
    let rh = geo.rhat(r);
    if !(rh > 0.0) {
        return Err(Error::Domain(format!("r_hat = {rh} <= 0 at r = {r}")));
    }
    let g = gas.gamma;
    let m0 = mu0(gas, inlet);
    let base = rh * rh * msq;
    let inv_csq = base.powf((g - 1.0) / (g + 1.0)) / (g * inlet.s0.exp() * m0.powf(g - 1.0));
    let e = re / rh;
    let dmsq = msq / (1.0 - msq) * ((g + 1.0) * e * inv_csq + (2.0 + (g - 1.0) * msq) / rh);
    let rho = m0 * base.powf(-1.0 / (g + 1.0));
    let dre = -rh * (rho - gas.b0);
    Ok((dmsq, dre))
}

/// March the background over `nr` uniform nodes of `[0, R]` and reconstruct all profiles.
pub fn integrate_background(gas: &GasConfig, inlet: &InletState, geo: &NozzleGeometry, nr: usize) -> Result<BackgroundSolution> {
    if nr < 3 {
        return Err(Error::param("nr", format!("{nr} < 3")));
    }
    if !(inlet.m0sq > 1.0) {
        return Err(Error::param("inlet", format!("entrance is not supersonic (M0^2 = {})", inlet.m0sq)));
    }
    let h = geo.depth / (nr - 1) as f64;
    let mut msq = Array1::zeros(nr);
    let mut re = Array1::zeros(nr);
    msq[0] = inlet.m0sq;
    re[0] = geo.r2 * inlet.e_entrance;
    let f = |r: f64, m: f64, q: f64| {
        rhs(r, m, q, gas, inlet, geo).map_err(|e| match e {
            Error::SonicSingularity { r, .. } => Error::SonicCrossing { r, msq: m },
            other => other,
        })
    };
    for i in 0..nr - 1 {
        let r = i as f64 * h;
        let (m, q) = (msq[i], re[i]);
        let (k1m, k1q) = f(r, m, q)?;
        let (k2m, k2q) = f(r + 0.5 * h, m + 0.5 * h * k1m, q + 0.5 * h * k1q)?;
        let (k3m, k3q) = f(r + 0.5 * h, m + 0.5 * h * k2m, q + 0.5 * h * k2q)?;
        let (k4m, k4q) = f(r + h, m + h * k3m, q + h * k3q)?;
        let mn = m + h / 6.0 * (k1m + 2.0 * k2m + 2.0 * k3m + k4m);
        let qn = q + h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
        let rn = r + h;
        if !mn.is_finite() || mn.abs() > 1e6 {
            return Err(Error::Divergence { r: rn, msq: mn });
        }
        if mn <= 1.0 + 1e-8 {
            return Err(Error::SonicCrossing { r: rn, msq: mn });
        }
        msq[i + 1] = mn;
        re[i + 1] = qn;
    }
    reconstruct(gas, inlet, geo, h, msq, re)
}

fn reconstruct(gas: &GasConfig, inlet: &InletState, geo: &NozzleGeometry, h: f64, msq: Array1<f64>, re: Array1<f64>) -> Result<BackgroundSolution> {
    let nr = msq.len();
    let g = gas.gamma;
    let es0 = inlet.s0.exp();
    let m0 = mu0(gas, inlet);
    let r = Array1::from_shape_fn(nr, |i| i as f64 * h);
    let rhat = r.mapv(|x| geo.rhat(x));
    let mut e = Array1::zeros(nr);
    let mut de = Array1::zeros(nr);
    let mut dmsq = Array1::zeros(nr);
    let mut rho = Array1::zeros(nr);
    let mut drho = Array1::zeros(nr);
    let mut u = Array1::zeros(nr);
    let mut du = Array1::zeros(nr);
    for i in 0..nr {
        let rh = rhat[i];
        let (dm, dq) = rhs(r[i], msq[i], re[i], gas, inlet, geo)?;
        e[i] = re[i] / rh;
        de[i] = (dq + e[i]) / rh;
        dmsq[i] = dm;
        rho[i] = m0 * (rh * rh * msq[i]).powf(-1.0 / (g + 1.0));
        let dlnrho = -(-2.0 / rh + dm / msq[i]) / (g + 1.0);
        drho[i] = rho[i] * dlnrho;
        u[i] = inlet.j0 / (rh * rho[i]);
        du[i] = u[i] * (1.0 / rh - dlnrho);
    }
    let p = rho.mapv(|d: f64| es0 * d.powf(g));
    let csq = rho.mapv(|d: f64| g * es0 * d.powf(g - 1.0));
    let bern = Array1::from_shape_fn(nr, |i| 0.5 * u[i] * u[i] + g * p[i] / ((g - 1.0) * rho[i]));
    if let Some(i) = csq.iter().position(|c| !(*c > 0.0)) {
        return Err(Error::InvalidBackground(format!("c^2 <= 0 at node {i}")));
    }
    // Φ̄ = Φ̄(0) - ∫ Ē: trapezoid with the Euler-Maclaurin end correction built from Ē'.
    let phi0 = 0.5 * inlet.u0 * inlet.u0 + g * es0 / (g - 1.0) * (inlet.j0 / (geo.r2 * inlet.u0)).powf(g - 1.0);
    let mut phi = Array1::zeros(nr);
    let mut trap = 0.0;
    phi[0] = phi0;
    for i in 1..nr {
        trap += 0.5 * h * (e[i - 1] + e[i]);
        let corr = h * h / 12.0 * (de[i] - de[0]);
        phi[i] = phi0 - (trap - corr);
    }
    Ok(BackgroundSolution {
        r,
        rhat,
        msq,
        e,
        rho,
        u,
        p,
        phi,
        csq,
        bern,
        dmsq,
        de,
        du,
        drho,
        mu0: m0,
        gamma: g,
        s0: inlet.s0,
        j0: inlet.j0,
        b0: gas.b0,
        dr: h,
    })
}

/// Independent admissibility checks on the entrance data.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub m0sq: f64,
    pub supersonic: bool,
    pub log_ratio: f64,
    pub log_ratio_bound: f64,
    pub log_ratio_ok: bool,
    pub u_a: f64,
    pub u_a_ok: bool,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.supersonic && self.log_ratio_ok && self.u_a_ok
    }
}

pub fn validate_inlet(gas: &GasConfig, inlet: &InletState, geo: &NozzleGeometry) -> ValidationReport {
    let g = gas.gamma;
    let (lr, bound) = geo.log_ratio(g);
    let u_a = inlet.j0 * (g * inlet.s0.exp() / (2.0 * geo.r1.powf(g))).powf(1.0 / (g - 2.0));
    ValidationReport {
        m0sq: inlet.m0sq,
        supersonic: inlet.m0sq > 1.0,
        log_ratio: lr,
        log_ratio_bound: bound,
        log_ratio_ok: lr < bound,
        u_a,
        u_a_ok: inlet.u0 > u_a,
    }
}

/// `h(r) = ρ̄/c̄² - 1/(2r̂²)` and its minimum `μ_R`.
pub fn positivity_weight(bg: &BackgroundSolution) -> (Array1<f64>, f64) {
    let h = Array1::from_shape_fn(bg.len(), |i| bg.rho[i] / bg.csq[i] - 0.5 / (bg.rhat[i] * bg.rhat[i]));
    let mu = h.iter().cloned().fold(f64::INFINITY, f64::min);
    (h, mu)
}

/// Observed RK4 order from `M̄²(R)` on three successively halved grids.
pub fn observed_order(gas: &GasConfig, inlet: &InletState, geo: &NozzleGeometry, nrs: [usize; 3]) -> Result<f64> {
    let mut end = [0.0; 3];
    for (k, n) in nrs.iter().enumerate() {
        let bg = integrate_background(gas, inlet, geo, *n)?;
        end[k] = bg.msq[bg.len() - 1];
    }
    let ratio = (end[0] - end[1]) / (end[1] - end[2]);
    let refine = ((nrs[1] - 1) as f64) / ((nrs[0] - 1) as f64);
    Ok(ratio.abs().ln() / refine.ln())
}

/// Field magnitude `|Ē(0)|` at the edge of the monotone regime: the least negative entrance
/// field for which `M̄²` still increases at every node of `[0, R]`.
pub fn critical_entrance_field(gas: &GasConfig, inlet: &InletState, geo: &NozzleGeometry, nr: usize, tol: f64) -> Result<f64> {
    let monotone = |e0: f64| -> bool {
        let mut inl = *inlet;
        inl.e_entrance = e0;
        matches!(integrate_background(gas, &inl, geo, nr), Ok(bg) if bg.msq_increasing())
    };
    if monotone(0.0) {
        return Ok(0.0);
    }
    let mut lo = -1.0;
    while !monotone(lo) {
        lo *= 2.0;
        if lo < -1e8 {
            return Err(Error::Domain("no monotone background for any entrance field".into()));
        }
    }
    let mut hi = if lo == -1.0 { 0.0 } else { lo / 2.0 };
    while (hi - lo).abs() > tol * lo.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        if monotone(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(-lo)
}

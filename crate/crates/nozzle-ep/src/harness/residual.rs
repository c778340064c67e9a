//! Residuals of the full rotated Euler-Poisson system at a candidate state.

use ndarray::Array2;

use crate::background::BackgroundSolution;
use crate::domain::{fd, GasConfig, Grid};
use crate::error::Result;
use crate::state::FlowState;
use crate::transport::density_from_state;

/// Normalized interior `L²` residual of each equation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Residuals {
    pub continuity: f64,
    pub momentum_r: f64,
    pub momentum_theta: f64,
    pub bernoulli: f64,
    pub entropy: f64,
    pub poisson: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.as_array().iter().copied().fold(0.0, f64::max)
    }

    pub fn as_array(&self) -> [f64; 6] {
        [self.continuity, self.momentum_r, self.momentum_theta, self.bernoulli, self.entropy, self.poisson]
    }

    pub const NAMES: [&'static str; 6] = ["continuity", "momentum_r", "momentum_theta", "bernoulli", "entropy", "poisson"];
}

/// Interior `L²` norm of `res` divided by `max(1, scale)`. Rows next to the radial boundaries
/// are left out: centered differences there act on one-sided reconstructions and converge at
/// first order only.
fn normalized(res: &Array2<f64>, scale: f64, grid: &Grid) -> f64 {
    let (nr, nt) = res.dim();
    let mut s = 0.0;
    for i in 2..nr.saturating_sub(2) {
        for j in 1..nt - 1 {
            s += res[[i, j]].powi(2);
        }
    }
    (s * grid.dr * grid.dtheta).sqrt() / scale.max(1.0)
}

fn max_abs(fields: &[&Array2<f64>]) -> f64 {
    fields.iter().flat_map(|f| f.iter()).fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Radial derivative of `total`: analytic `bar'` plus centered differences of `total - bar`.
fn dr_split(total: &Array2<f64>, bar: &ndarray::Array1<f64>, dbar: &ndarray::Array1<f64>, grid: &Grid) -> Array2<f64> {
    let pert = total - &grid.radial(bar);
    fd::dr(&pert, grid.dr) + &grid.radial(dbar)
}

/// All equations of the rotated system with background derivatives in closed form.
pub fn full_system_residual(state: &FlowState, bg: &BackgroundSolution, gas: &GasConfig, grid: &Grid) -> Result<Residuals> {
    let g = gas.gamma;
    let (rho, _) = density_from_state(&state.s, &state.k, &state.u, &state.v, &state.phi, g)?;
    let (u, v, phi, s, k) = (&state.u, &state.v, &state.phi, &state.s, &state.k);
    let (nr, nt) = (grid.nr, grid.ntheta);
    let rh = grid.radial(&grid.rhat);
    let dt = grid.dtheta;

    let p = Array2::from_shape_fn((nr, nt), |(i, j)| s[[i, j]].exp() * rho[[i, j]].powf(g));
    let dp_bar = &bg.csq * &bg.drho;
    let ephi = bg.e.mapv(|e| -e);
    let de_neg = bg.de.mapv(|x| -x);

    let u_r = dr_split(u, &bg.u, &bg.du, grid);
    let u_t = fd::dtheta(u, dt);
    let v_r = fd::dr(v, grid.dr);
    let v_t = fd::dtheta(v, dt);
    let p_r = dr_split(&p, &bg.p, &dp_bar, grid);
    let p_t = fd::dtheta(&p, dt);
    let phi_r = dr_split(phi, &bg.phi, &ephi, grid);
    let phi_t = fd::dtheta(phi, dt);
    let phi_tt = fd::dtt(phi, dt);
    let phi_rr = {
        let pert = phi - &grid.radial(&bg.phi);
        fd::drr(&pert, grid.dr) + &grid.radial(&de_neg)
    };
    let k_r = fd::dr(k, grid.dr);
    let k_t = fd::dtheta(k, dt);
    let s_r = fd::dr(s, grid.dr);
    let s_t = fd::dtheta(s, dt);

    // continuity: background mass flux r̂ρ̄Ū is constant
    let flux_bar = grid.radial(&(&(&bg.rhat * &bg.rho) * &bg.u));
    let flux = &(&rh * &rho) * u;
    let flux_r = fd::dr(&(&flux - &flux_bar), grid.dr);
    let rv = &rho * v;
    let rv_t = fd::dtheta(&rv, dt);
    let cont = &flux_r + &rv_t;

    let mut mr = grid.zeros();
    let mut mt = grid.zeros();
    let mut bern = grid.zeros();
    let mut ent = grid.zeros();
    let mut pois = grid.zeros();
    let mut scales = [0.0f64; 5];
    for i in 0..nr {
        let r = grid.rhat[i];
        for j in 0..nt {
            let (ro, uu, vv) = (rho[[i, j]], u[[i, j]], v[[i, j]]);
            let terms = [ro * uu * u_r[[i, j]], ro * vv * u_t[[i, j]] / r, ro * vv * vv / r, p_r[[i, j]], ro * phi_r[[i, j]]];
            mr[[i, j]] = terms[0] + terms[1] + terms[2] + terms[3] - terms[4];
            scales[0] = terms.iter().fold(scales[0], |m, t| m.max(t.abs()));
            let terms = [ro * uu * v_r[[i, j]], ro * uu * vv / r, ro * vv * v_t[[i, j]] / r, p_t[[i, j]] / r, ro * phi_t[[i, j]] / r];
            mt[[i, j]] = terms[0] - terms[1] + terms[2] + terms[3] - terms[4];
            scales[1] = terms.iter().fold(scales[1], |m, t| m.max(t.abs()));
            let terms = [ro * uu * k_r[[i, j]], ro * vv * k_t[[i, j]] / r];
            bern[[i, j]] = terms[0] + terms[1];
            scales[2] = terms.iter().fold(scales[2], |m, t| m.max(t.abs()));
            let terms = [ro * uu * s_r[[i, j]], ro * vv * s_t[[i, j]] / r];
            ent[[i, j]] = terms[0] + terms[1];
            scales[3] = terms.iter().fold(scales[3], |m, t| m.max(t.abs()));
            let b = gas.b_at(i, j);
            let terms = [phi_rr[[i, j]], phi_tt[[i, j]] / (r * r), phi_r[[i, j]] / r, ro, b];
            pois[[i, j]] = terms[0] + terms[1] - terms[2] - (terms[3] - terms[4]);
            scales[4] = terms.iter().fold(scales[4], |m, t| m.max(t.abs()));
        }
    }
    let cont_scale = max_abs(&[&flux_r, &rv_t]);
    Ok(Residuals {
        continuity: normalized(&cont, cont_scale, grid),
        momentum_r: normalized(&mr, scales[0], grid),
        momentum_theta: normalized(&mt, scales[1], grid),
        bernoulli: normalized(&bern, scales[2], grid),
        entropy: normalized(&ent, scales[3], grid),
        poisson: normalized(&pois, scales[4], grid),
    })
}

/// Interior `L²` norm of `U((r̂V)_r - U_θ) - (e^S ρ^{γ-1} S_θ/(γ-1) - 𝒦_θ)`, normalized like
/// the system residuals.
pub fn vorticity_identity_residual(state: &FlowState, gas: &GasConfig, grid: &Grid) -> Result<f64> {
    let g = gas.gamma;
    let (rho, _) = density_from_state(&state.s, &state.k, &state.u, &state.v, &state.phi, g)?;
    let rv = &grid.radial(&grid.rhat) * &state.v;
    let rv_r = fd::dr(&rv, grid.dr);
    let u_t = fd::dtheta(&state.u, grid.dtheta);
    let s_t = fd::dtheta(&state.s, grid.dtheta);
    let k_t = fd::dtheta(&state.k, grid.dtheta);
    let mut res = grid.zeros();
    let mut scale = 0.0f64;
    for ((i, j), r) in res.indexed_iter_mut() {
        let lhs = state.u[[i, j]] * (rv_r[[i, j]] - u_t[[i, j]]);
        let a = state.s[[i, j]].exp() * rho[[i, j]].powf(g - 1.0) / (g - 1.0) * s_t[[i, j]];
        let b = k_t[[i, j]];
        *r = lhs - (a - b);
        scale = scale.max(lhs.abs()).max(a.abs()).max(b.abs());
    }
    Ok(normalized(&res, scale, grid))
}

/// `κ = min(U² + V² - c²)`; positive means uniformly supersonic.
pub fn supersonic_margin(state: &FlowState, gas: &GasConfig) -> f64 {
    let g = gas.gamma;
    let mut kappa = f64::INFINITY;
    for ((i, j), u) in state.u.indexed_iter() {
        let v = state.v[[i, j]];
        let q = u * u + v * v;
        let c2 = (g - 1.0) * (state.phi[[i, j]] - 0.5 * q + state.k[[i, j]]);
        kappa = kappa.min(q - c2);
    }
    kappa
}

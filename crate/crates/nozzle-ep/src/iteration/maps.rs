//! The inner map `T1` on `(𝒰, 𝒱, Φ̌)`, the outer map `T2` on `(𝒮, 𝒦)` and the full solve.

use std::time::Instant;

use ndarray::Array2;

use super::rhs::{assemble_rhs, Rhs};
use super::Problem;
use crate::background::positivity_weight;
use crate::domain::fd;
use crate::error::{Error, Result};
use crate::harness::report::DiagnosticsReport;
use crate::harness::residual::{full_system_residual, supersonic_margin, vorticity_identity_residual};
use crate::linear::{build_multiplier, energy_estimate_ratio, galerkin_reduce, solve_spectral_bvp, synthesize_solution};
use crate::state::{FlowState, PerturbationState};
use crate::transport::{build_stream_function, density_from_state, transport_scalars, StreamData};

/// One application of `T1` with everything it was built from.
#[derive(Debug, Clone)]
pub struct InnerStep {
    pub state: PerturbationState,
    pub rhs: Rhs,
    /// Homogenized velocity potential `φ̃ = Σ ϑ_k η_k`.
    pub phi: Array2<f64>,
    /// Homogenized electric potential `Ψ = Σ ν_k η_k`.
    pub psi: Array2<f64>,
}

#[derive(Debug, Clone)]
pub struct InnerResult {
    pub state: PerturbationState,
    /// Increments `‖x_{n+1} - x_n‖` in the low norm.
    pub history: Vec<f64>,
    pub iterations: usize,
    pub last: InnerStep,
}

impl InnerResult {
    /// Largest ratio of consecutive increments, from the second step on when there are three.
    pub fn max_ratio(&self) -> f64 {
        max_ratio(&self.history)
    }
}

#[derive(Debug, Clone)]
pub struct OuterResult {
    /// Input velocity/potential with freshly transported `(𝒮, 𝒦)`.
    pub state: PerturbationState,
    pub stream: StreamData,
}

/// Largest ratio of consecutive increments, leaving out the first one when there are at least
/// three increments; 0 for fewer than two.
pub(crate) fn max_ratio(history: &[f64]) -> f64 {
    let skip = usize::from(history.len() >= 3);
    history
        .windows(2)
        .skip(skip)
        .filter(|w| w[0] > 0.0)
        .map(|w| w[1] / w[0])
        .fold(0.0, f64::max)
}

/// `T1`: freeze coefficients and sources at `current`, solve the mode system and rebuild
/// `(𝒰, 𝒱, Φ̌)`. The scalars `(𝒮, 𝒦)` pass through unchanged.
pub fn inner_map_t1(pb: &Problem, current: &PerturbationState) -> Result<InnerStep> {
    let grid = &pb.grid;
    let rhs = assemble_rhs(pb, current)?;
    let bvp = galerkin_reduce(&rhs.coeffs, &pb.bar, &rhs.big_f1, &rhs.big_f2, rhs.g.view(), &pb.basis, grid)?;
    let (theta, nu) = solve_spectral_bvp(&bvp)?;
    let (phi, psi) = synthesize_solution(&theta, &nu, &pb.basis, grid);
    let phi_t = theta.dot(&pb.basis.dtable(&grid.theta));
    let uc = fd::dr(&phi, grid.dr);
    let r2 = pb.geo.r2;
    let mut u = grid.zeros();
    let mut v = grid.zeros();
    for i in 0..grid.nr {
        let rh = grid.rhat[i];
        for j in 0..grid.ntheta {
            let vc = (phi_t[[i, j]] + r2 * pb.data.v_en[j]) / rh;
            u[[i, j]] = uc[[i, j]] - rhs.pot.phi_theta[[i, j]] / rh;
            v[[i, j]] = vc + rhs.pot.phi_r[[i, j]];
        }
    }
    let state = PerturbationState { u, v, phi: &psi + &rhs.phi_star, s: current.s.clone(), k: current.k.clone() };
    Ok(InnerStep { state, rhs, phi, psi })
}

/// Iterate `T1` from `start` with the configured relaxation until the increment drops below
/// `tol_inner`.
pub fn inner_fixed_point(pb: &Problem, start: &PerturbationState) -> Result<InnerResult> {
    let cfg = &pb.cfg;
    let mut x = start.clone();
    let mut history = Vec::new();
    for n in 0..cfg.max_inner {
        let step = inner_map_t1(pb, &x)?;
        let mut next = step.state.clone();
        if cfg.relax < 1.0 {
            let w = cfg.relax;
            next.u = &next.u * w + &x.u * (1.0 - w);
            next.v = &next.v * w + &x.v * (1.0 - w);
            next.phi = &next.phi * w + &x.phi * (1.0 - w);
        }
        let inc = next.low_norm_distance(&x, &pb.grid)?;
        history.push(inc);
        if !inc.is_finite() {
            break;
        }
        x = next;
        if inc <= cfg.tol_inner {
            return Ok(InnerResult { state: x, history, iterations: n + 1, last: step });
        }
    }
    let last = history.last().copied().unwrap_or(f64::NAN);
    Err(Error::NonConvergence { stage: "inner", iterations: history.len(), last, history })
}

/// `T2`: stream function of the given velocity, normalized row by row to the inlet flux, then `𝒮 = S_en(θ_en) - S0` and
/// `𝒦 = K_en(θ_en)` along it.
pub fn outer_map_t2(pb: &Problem, inner: &PerturbationState) -> Result<OuterResult> {
    let (grid, bg) = (&pb.grid, &pb.bg);
    let flow = FlowState::from_perturbation(bg, grid, inner);
    let (rho, _) = density_from_state(&flow.s, &flow.k, &flow.u, &flow.v, &flow.phi, pb.gas.gamma)?;
    let mut stream = build_stream_function(&rho, &flow.u, &flow.v, grid)?;
    stream.normalize_flux();
    let s0 = bg.s0;
    let s_en = |t: f64| pb.bd.s_en.eval(t) - s0;
    let k_en = |t: f64| pb.bd.k_en.eval(t);
    let mut fields = transport_scalars(&mut stream, &[&s_en, &k_en])?;
    let k = fields.pop().unwrap();
    let s = fields.pop().unwrap();
    let state = PerturbationState { s, k, ..inner.clone() };
    Ok(OuterResult { state, stream })
}

/// Entrance scalars carried along the rays `θ = const`.
fn ray_start(pb: &Problem) -> PerturbationState {
    let grid = &pb.grid;
    let mut x = PerturbationState::zeros(grid);
    for i in 0..grid.nr {
        for j in 0..grid.ntheta {
            x.s[[i, j]] = pb.data.s_en[j] - pb.bg.s0;
            x.k[[i, j]] = pb.data.k_en[j];
        }
    }
    x
}

/// Outer iteration over `(𝒮, 𝒦)` wrapped around the inner fixed point, followed by the
/// post-solve diagnostics.
pub fn solve_problem(pb: &Problem) -> Result<(FlowState, DiagnosticsReport)> {
    let clock = Instant::now();
    let (grid, bg, cfg) = (&pb.grid, &pb.bg, &pb.cfg);
    let sigma = pb.sigma()?;
    let mut x = ray_start(pb);
    let mut outer_history = Vec::new();
    let mut inner_histories = Vec::new();
    let mut finished = None;
    for _ in 0..cfg.max_outer {
        let inner = inner_fixed_point(pb, &x)?;
        inner_histories.push(inner.history.clone());
        let outer = outer_map_t2(pb, &inner.state)?;
        let inc = outer.state.scalar_distance(&x, grid)?;
        outer_history.push(inc);
        x = outer.state.clone();
        if inc <= cfg.tol_outer {
            finished = Some((inner, outer));
            break;
        }
        if !inc.is_finite() {
            break;
        }
    }
    let Some((inner, outer)) = finished else {
        let last = outer_history.last().copied().unwrap_or(f64::NAN);
        return Err(Error::NonConvergence { stage: "outer", iterations: outer_history.len(), last, history: outer_history });
    };

    let flow = FlowState::from_perturbation(bg, grid, &x);
    let kappa = supersonic_margin(&flow, &pb.gas);
    if !(kappa > 0.0) {
        return Err(Error::RegimeFailure(kappa));
    }
    let residuals = full_system_residual(&flow, bg, &pb.gas, grid)?;
    let vorticity_residual = vorticity_identity_residual(&flow, &pb.gas, grid)?;

    let last = grid.ntheta - 1;
    let mass_flux_drift = outer.stream.flux_drift;

    let (uv, ph, sk) = x.norms(grid)?;
    let total = uv + ph + sk;
    let deviation_ratio = (sigma.total() > 0.0).then(|| total / sigma.total());

    let step = &inner.last;
    let energy_ratio = energy_estimate_ratio(&step.phi, &step.psi, &step.rhs.big_f1, &step.rhs.big_f2, &step.rhs.g, grid, None).ok();
    let (_, mu) = positivity_weight(bg);
    let multiplier = build_multiplier(&pb.bar, &step.rhs.coeffs, grid, mu, &cfg.multiplier).map(|g| g.rbar).map_err(|e| e.to_string());
    let report = &step.rhs.coeffs.report;

    let wall_defect = (0..grid.nr).map(|i| x.v[[i, 0]].abs().max(x.v[[i, last]].abs())).fold(0.0, f64::max);
    let inner_ratio = inner_histories.iter().map(|h| max_ratio(h)).fold(0.0, f64::max);

    let diag = DiagnosticsReport {
        sigma,
        residuals,
        vorticity_residual,
        kappa,
        mass_flux_drift,
        deviation: [uv, ph, sk],
        deviation_ratio,
        energy_ratio,
        multiplier,
        kappa0: report.kappa0,
        kappa1: report.kappa1,
        coefficient_deviation: report.deviation,
        outer_ratio: max_ratio(&outer_history),
        outer_history,
        inner_histories,
        inner_ratio,
        set_radius_exceeded: sk > cfg.delta_mu || uv + ph > cfg.delta_nu,
        clamped: outer.stream.clamped,
        wall_defect,
        elapsed_seconds: clock.elapsed().as_secs_f64(),
    };
    Ok((flow, diag))
}

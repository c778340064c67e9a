#![allow(dead_code)]

use std::f64::consts::FRAC_PI_4;

use nozzle_ep::background::integrate_background;
use nozzle_ep::domain::{GasConfig, InletState, NozzleGeometry};
use nozzle_ep::iteration::{BoundaryData, Problem, Profile, Reference, SolverConfig};

/// γ = 1.4, r1 = 0.5, r2 = 1, θ0 = π/4, R = 0.25, ρ0 = 1, U0 = 2, P0 = 1/1.4, Ē(0) = -10.
pub fn fixture() -> (GasConfig, NozzleGeometry, InletState) {
    let gas = GasConfig::new(1.4, 1.0).unwrap();
    let geo = NozzleGeometry::new(0.5, 1.0, FRAC_PI_4, 0.25).unwrap();
    let inlet = InletState::new(1.0, 2.0, 1.0 / 1.4, -10.0, &gas, &geo).unwrap();
    (gas, geo, inlet)
}

pub fn solver(nr: usize, m: usize) -> SolverConfig {
    SolverConfig { nr, m, ..SolverConfig::default() }
}

/// Boundary data built from expressions in `theta`; missing entries keep background values.
pub fn problem_with(cfg: SolverConfig, exprs: &[(&str, &str)], vars: &[(&str, f64)]) -> Problem {
    let (gas, geo, inlet) = fixture();
    let bg = integrate_background(&gas, &inlet, &geo, cfg.nr).unwrap();
    let r = Reference::new(&inlet, &bg);
    let mut scope = BoundaryData::scope(&r, &geo);
    for (n, v) in vars {
        scope.set(n, *v);
    }
    let mut bd = BoundaryData::background(&r);
    for (key, src) in exprs {
        let p = Profile::parse(src, &scope).unwrap();
        match *key {
            "u_en" => bd.u_en = p,
            "v_en" => bd.v_en = p,
            "e_en" => bd.e_en = p,
            "k_en" => bd.k_en = p,
            "s_en" => bd.s_en = p,
            "phi_ex" => bd.phi_ex = p,
            _ => panic!("unknown profile {key}"),
        }
    }
    Problem::new(gas, geo, inlet, bd, cfg).unwrap()
}

pub const V_SMALL: &str = "eps*sin(pi*(theta+theta0)/theta0)";
pub const S_SMALL: &str = "s0 + eps*cos(pi*theta/theta0)";

/// Odd tangential inlet velocity and even entropy bump of size `eps`.
pub fn small_sigma(eps: f64, nr: usize, m: usize) -> Problem {
    problem_with(solver(nr, m), &[("v_en", V_SMALL), ("s_en", S_SMALL)], &[("eps", eps)])
}

pub fn sigma0(nr: usize, m: usize) -> Problem {
    problem_with(solver(nr, m), &[], &[])
}

/// Every profile perturbed with the parity that commutes with `θ ↦ -θ`.
pub fn symmetric(eps: f64, nr: usize, m: usize) -> Problem {
    problem_with(
        solver(nr, m),
        &[
            ("u_en", "u0 + eps*cos(pi*theta/theta0)"),
            ("v_en", V_SMALL),
            ("e_en", "e0 + eps*cos(pi*theta/theta0)"),
            ("k_en", "eps*(1 + cos(pi*theta/theta0))"),
            ("s_en", S_SMALL),
            ("phi_ex", "phi_r + eps*cos(2*pi*theta/theta0)"),
        ],
        &[("eps", eps)],
    )
}

pub fn max_abs(a: &ndarray::Array2<f64>) -> f64 {
    a.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

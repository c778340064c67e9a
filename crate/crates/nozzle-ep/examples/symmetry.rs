//! Reflection-symmetric data give even U, Φ, S, 𝒦 and odd V.

use nozzle_ep::harness::configfile::RunConfig;
use nozzle_ep::iteration::solve_problem;
use ndarray::Array2;

const DATA: &str = "
u_en = u0 + eps*cos(pi*theta/theta0)
v_en = eps*sin(pi*(theta+theta0)/theta0)
e_en = e0 + eps*cos(pi*theta/theta0)
k_en = eps*(1 + cos(pi*theta/theta0))
s_en = s0 + eps*cos(pi*theta/theta0)
phi_ex = phi_r + eps*cos(2*pi*theta/theta0)
param.eps = 1e-3
";

fn parity(a: &Array2<f64>, sign: f64) -> f64 {
    let n = a.ncols();
    a.indexed_iter().map(|((i, j), x)| (x - sign * a[[i, n - 1 - j]]).abs()).fold(0.0, f64::max)
}

fn main() -> nozzle_ep::Result<()> {
    let rc = RunConfig::parse(&format!("{}{DATA}", include_str!("../configs/fixture.cfg")))?;
    let (flow, _) = solve_problem(&rc.problem()?)?;
    for (name, f, sign) in [("U", &flow.u, 1.0), ("V", &flow.v, -1.0), ("Phi", &flow.phi, 1.0), ("S", &flow.s, 1.0), ("K", &flow.k, 1.0)] {
        println!("{name:>3}: parity defect {:.2e}", parity(f, sign));
    }
    Ok(())
}

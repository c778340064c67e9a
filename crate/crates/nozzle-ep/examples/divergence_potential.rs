//! Divergence potential of a vorticity source and the curl-free shifted velocity.

use std::f64::consts::PI;

use ndarray::Array2;
use nozzle_ep::domain::{Grid, NozzleGeometry, SineBasis};
use nozzle_ep::potentials::{curl_potential, discrete_curl, shift_velocity, solve_div_potential};

fn interior_max(a: &Array2<f64>) -> f64 {
    let (nr, nt) = a.dim();
    a.indexed_iter().filter(|((i, j), _)| (2..nr - 2).contains(i) && (2..nt - 2).contains(j)).fold(0.0, |m, (_, x)| m.max(x.abs()))
}

fn main() -> nozzle_ep::Result<()> {
    let geo = NozzleGeometry::new(0.5, 1.0, PI / 4.0, 0.25)?;
    let grid = Grid::new(&geo, 129, 257)?;
    let t0 = geo.theta0;
    // U = 2, r̂V = r(R - r)(1 + r) sin(π(θ + θ0)/(2θ0)): vortical, V = 0 on walls, entrance, exit
    let prof = |r: f64| r * (0.25 - r) * (1.0 + r);
    let zeta = |t: f64| (PI * (t + t0) / (2.0 * t0)).sin();
    let u = grid.sample(|_, _| 2.0);
    let v = grid.sample(|r, t| prof(r) / (1.0 - r) * zeta(t));
    let curl = discrete_curl(&u, &v, &grid);
    // the shift removes the source from the curl: curl(Ǔ, V̌) = curl(U, V) - f3
    let pot = solve_div_potential(&curl, &grid, &SineBasis::new(t0, 64))?;
    let (uc, vc) = shift_velocity(&u, &v, &pot, &grid);
    let after = discrete_curl(&uc, &vc, &grid);
    println!("interior curl before shift {:.3e}", interior_max(&curl));
    println!("interior curl after shift  {:.3e}", interior_max(&after));
    let tol = 2.0 * after.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let cp = curl_potential(&uc, &vc, &grid, tol)?;
    println!("curl potential path gap {:.3e}, psi at the exit corner {:.6}", cp.path_gap, cp.psi[[grid.nr - 1, grid.ntheta - 1]]);
    Ok(())
}

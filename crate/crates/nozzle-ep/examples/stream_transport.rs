//! Stream function of a perturbed nozzle flow and the transport of an entropy profile.

use std::f64::consts::PI;

use nozzle_ep::background::integrate_background;
use nozzle_ep::domain::Grid;
use nozzle_ep::harness::configfile::RunConfig;
use nozzle_ep::transport::{build_stream_function, interp_theta, trace_streamline, transport_scalars};

fn main() -> nozzle_ep::Result<()> {
    let rc = RunConfig::parse(include_str!("../configs/fixture.cfg"))?;
    let gas = rc.gas()?;
    let inlet = rc.inlet(&gas)?;
    let bg = integrate_background(&gas, &inlet, &rc.geo, 129)?;
    let grid = Grid::new(&rc.geo, 129, 129)?;
    let t0 = rc.geo.theta0;
    // velocity of the stream function w = J0 (θ + θ0) + ε J0 r (1 + cos(πθ/θ0)), which keeps
    // both walls as streamlines: r̂ρU = w_θ, ρV = -w_r
    let (j0, eps) = (bg.j0, 0.2);
    let rho = grid.radial(&bg.rho);
    let rhat = grid.radial(&grid.rhat);
    let w_t = grid.sample(|r, t| j0 * (1.0 - eps * r * PI / t0 * (PI * t / t0).sin()));
    let w_r = grid.sample(|_, t| eps * j0 * (1.0 + (PI * t / t0).cos()));
    let u = &w_t / &(&rhat * &rho);
    let v = -&w_r / &rho;
    let mut sd = build_stream_function(&grid.radial(&bg.rho), &u, &v, &grid)?;
    let s_en = |t: f64| (PI * t / t0).cos();
    let s = transport_scalars(&mut sd, &[&s_en])?.pop().unwrap();
    let (lo, hi) = s.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), x| (l.min(*x), h.max(*x)));
    println!("transported range [{lo:.6}, {hi:.6}], inlet range [-1, 1], clamped {:.1e}", sd.clamped);
    for start in [-0.5, 0.0, 0.5] {
        let path = trace_streamline(&u, &v, &grid, start);
        let drift = (0..grid.nr).map(|i| (interp_theta(s.row(i), &grid, path[i]) - s_en(start)).abs()).fold(0.0, f64::max);
        println!("streamline from {start:+.2}: exit angle {:+.5}, entropy drift {drift:.2e}", path[grid.nr - 1]);
    }
    Ok(())
}

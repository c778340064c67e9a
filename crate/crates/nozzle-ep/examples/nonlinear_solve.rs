//! Full nonlinear solve of the small-perturbation configuration.

use nozzle_ep::harness::configfile::RunConfig;
use nozzle_ep::iteration::solve_problem;

fn main() -> nozzle_ep::Result<()> {
    let rc = RunConfig::parse(include_str!("../configs/small-sigma.cfg"))?;
    let pb = rc.problem()?;
    let (flow, report) = solve_problem(&pb)?;
    print!("{}", report.to_kv());
    let mid = pb.grid.ntheta / 2;
    println!("exit U on the axis {:.12}", flow.u[[pb.grid.nr - 1, mid]]);
    Ok(())
}

//! Radial background of the reference nozzle and its invariants.

use nozzle_ep::background::{integrate_background, positivity_weight, validate_inlet};
use nozzle_ep::harness::configfile::RunConfig;

fn main() -> nozzle_ep::Result<()> {
    let rc = RunConfig::parse(include_str!("../configs/fixture.cfg"))?;
    let gas = rc.gas()?;
    let inlet = rc.inlet(&gas)?;
    let check = validate_inlet(&gas, &inlet, &rc.geo);
    println!("entrance M^2 = {:.6}, inlet checks pass: {}", check.m0sq, check.all_pass());

    let bg = integrate_background(&gas, &inlet, &rc.geo, 513)?;
    println!("{:>8} {:>12} {:>12} {:>12} {:>12}", "r", "M^2", "E", "rho", "U");
    for i in (0..bg.len()).step_by(64) {
        println!("{:8.5} {:12.6} {:12.6} {:12.6} {:12.6}", bg.r[i], bg.msq[i], bg.e[i], bg.rho[i], bg.u[i]);
    }
    println!("mass flux error  {:.3e}", bg.mass_flux_error());
    println!("Bernoulli gap    {:.3e}", bg.bernoulli_gap());
    println!("M^2 increasing   {}", bg.msq_increasing());
    println!("positivity mu_r  {:.6}", positivity_weight(&bg).1);
    Ok(())
}

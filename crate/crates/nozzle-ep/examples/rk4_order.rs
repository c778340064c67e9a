//! Step-halving study of the background march.

use nozzle_ep::background::{critical_entrance_field, integrate_background, observed_order};
use nozzle_ep::harness::configfile::RunConfig;

fn main() -> nozzle_ep::Result<()> {
    let rc = RunConfig::parse(include_str!("../configs/fixture.cfg"))?;
    let gas = rc.gas()?;
    let inlet = rc.inlet(&gas)?;
    for nr in [65, 129, 257, 513] {
        let bg = integrate_background(&gas, &inlet, &rc.geo, nr)?;
        println!("nr = {nr:4}: M^2(R) = {:.16}", bg.msq[nr - 1]);
    }
    println!("observed order {:.4}", observed_order(&gas, &inlet, &rc.geo, [129, 257, 513])?);
    // weakest entrance field for which the march stays supersonic
    let e = critical_entrance_field(&gas, &inlet, &rc.geo, 257, 1e-6)?;
    println!("critical entrance field {e:.6}");
    Ok(())
}

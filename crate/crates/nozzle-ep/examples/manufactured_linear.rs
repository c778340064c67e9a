//! Manufactured single-mode solutions of the mode system under radial refinement.

use nozzle_ep::domain::BasisKind;
use nozzle_ep::harness::configfile::RunConfig;
use nozzle_ep::linear::{manufactured_study, Manufactured};

fn main() -> nozzle_ep::Result<()> {
    let rc = RunConfig::parse(include_str!("../configs/fixture.cfg"))?;
    let gas = rc.gas()?;
    let inlet = rc.inlet(&gas)?;
    for pair in [Manufactured::Quadratic, Manufactured::Modulated { alpha: 1.0 }] {
        let st = manufactured_study(pair, &gas, &inlet, &rc.geo, 8, BasisKind::Even, &[65, 129, 257, 513], 1)?;
        println!("{pair:?}");
        for run in &st.runs {
            println!("  nr = {:4}  H1 error {:.3e}  energy ratio {:.6}", run.nr, run.error_h1, run.energy_ratio);
        }
        println!("  orders {:?}", st.orders);
    }
    Ok(())
}

//! Closed-form multiplier on constant data and on the nozzle coefficients.

use std::f64::consts::FRAC_PI_4;

use nozzle_ep::background::{integrate_background, positivity_weight};
use nozzle_ep::domain::{GasConfig, Grid, InletState, NozzleGeometry};
use nozzle_ep::linear::{assemble_bar_coefficients, assemble_state_coefficients, build_multiplier, riccati_multiplier, MultiplierConfig, RiccatiData};
use nozzle_ep::state::PerturbationState;

fn nozzle(depth: f64) -> nozzle_ep::Result<()> {
    let gas = GasConfig::new(1.4, 1.0)?;
    let geo = NozzleGeometry::new(0.5, 1.0, FRAC_PI_4, depth)?;
    let inlet = InletState::new(1.0, 2.0, 1.0 / 1.4, -10.0, &gas, &geo)?;
    let bg = integrate_background(&gas, &inlet, &geo, 33)?;
    let bar = assemble_bar_coefficients(&bg)?;
    let grid = Grid::new(&geo, 33, 33)?;
    let st = assemble_state_coefficients(&bg, &bar, &PerturbationState::zeros(&grid), &grid, &gas)?;
    match build_multiplier(&bar, &st, &grid, positivity_weight(&bg).1, &MultiplierConfig::default()) {
        Ok(g) => println!("R = {depth}: G(0) = {:.6}, bound {:.6e}, min G {:.4}, residual {:.2e}", g.eval(0.0), g.rbar, g.min_value(), g.riccati_residual()),
        Err(e) => println!("R = {depth}: {e}"),
    }
    Ok(())
}

fn main() -> nozzle_ep::Result<()> {
    let g = riccati_multiplier(RiccatiData { p: 0.0, q: 1.0, h: 1.0 }, 0.2, 1.0, 257)?;
    println!("constant data: branch {:?}", g.branch);
    println!("  G(0) = {:.12} (sqrt(1.2) cot 0.2 = {:.12})", g.eval(0.0), 1.2f64.sqrt() / 0.2f64.tan());
    println!("  bound = {:.12}, residual {:.2e}", g.rbar, g.riccati_residual());
    nozzle(1e-3)?;
    nozzle(0.25)?;
    Ok(())
}

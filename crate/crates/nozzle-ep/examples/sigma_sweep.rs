//! Deviation-to-σ ratio across perturbation sizes, up to the first failing solve.

use nozzle_ep::harness::configfile::RunConfig;
use nozzle_ep::iteration::solve_problem;

fn main() -> nozzle_ep::Result<()> {
    let mut rc = RunConfig::parse(include_str!("../configs/small-sigma.cfg"))?;
    rc.solver.nr = 65;
    for eps in [1e-5, 1e-4, 1e-3, 1e-2, 3e-2, 1e-1, 3e-1] {
        rc.set_param("eps", eps);
        match rc.problem().and_then(|pb| solve_problem(&pb)) {
            Ok((_, d)) => println!(
                "eps {eps:.0e}: sigma {:.3e}  deviation/sigma {:.5}  kappa {:.4}  outer {}  contraction {:.2e}",
                d.sigma.total(),
                d.deviation_ratio.unwrap_or(f64::NAN),
                d.kappa,
                d.outer_iterations(),
                d.inner_ratio.max(d.outer_ratio)
            ),
            Err(e) => {
                println!("eps {eps:.0e}: {e}");
                break;
            }
        }
    }
    Ok(())
}

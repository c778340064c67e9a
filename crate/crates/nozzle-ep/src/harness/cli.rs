//! `nozzle-ep` subcommands. Exit codes: 0 success, 1 validation failure, 2 solver failure,
//! 64 usage error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use super::configfile::{RunConfig, SweepTarget};
use super::io;
use super::report::{num, parse_kv};
use super::residual::{full_system_residual, Residuals};
use crate::background::{integrate_background, positivity_weight, validate_inlet};
use crate::error::{Error, Result};
use crate::iteration::solve_problem;
use crate::linear::{assemble_bar_coefficients, assemble_state_coefficients, build_multiplier, manufactured_study, Manufactured};
use crate::state::PerturbationState;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Report file written next to the fields by `solve --out`.
pub const REPORT_FILE: &str = "report.txt";

#[derive(Debug, Parser)]
#[command(name = "nozzle-ep", about = "Steady supersonic Euler-Poisson nozzle solver")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Integrate the radial background and print its invariants.
    Background {
        #[arg(long)]
        config: PathBuf,
        /// Write the background profiles as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Background coefficient checks, and with `--manufactured` the convergence study of the
    /// mode solver.
    Linear {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        manufactured: bool,
    },
    /// Run the nonlinear solve and print the diagnostics report.
    Solve {
        #[arg(long)]
        config: PathBuf,
        /// Directory for the field CSVs and `report.txt`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute residuals of a stored state and compare with its report.
    Verify {
        dir: PathBuf,
        #[arg(long)]
        config: PathBuf,
    },
    /// Bisect for the largest converging value of the configured sweep target.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
}

/// Exit code of a library error: input problems are validation failures, everything else a
/// solver failure.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config { .. } | Error::Parse { .. } | Error::InvalidParameter { .. } | Error::Incompatible(_) | Error::Unsupported(_) | Error::Io(_) => EXIT_VALIDATION,
        _ => EXIT_SOLVER,
    }
}

/// Parse `args` (including the program name) and run; output goes to `out`, errors to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.cmd, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Cmd, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Cmd::Background { config, out: path } => background(&config, path.as_deref(), out),
        Cmd::Linear { config, manufactured } => linear(&config, manufactured, out),
        Cmd::Solve { config, out: dir } => solve(&config, dir.as_deref(), out),
        Cmd::Verify { dir, config } => verify(&dir, &config, out, err),
        Cmd::Sweep { config } => sweep(&config, out),
    }
}

fn kv(out: &mut dyn Write, key: &str, value: impl std::fmt::Display) -> Result<()> {
    writeln!(out, "{key} = {value}")?;
    Ok(())
}

fn background(config: &Path, path: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    let rc = RunConfig::from_file(config)?;
    let gas = rc.gas()?;
    let inlet = rc.inlet(&gas)?;
    let v = validate_inlet(&gas, &inlet, &rc.geo);
    kv(out, "m0sq", num(v.m0sq))?;
    kv(out, "check.supersonic", v.supersonic)?;
    kv(out, "log_ratio", num(v.log_ratio))?;
    kv(out, "log_ratio_bound", num(v.log_ratio_bound))?;
    kv(out, "check.log_ratio", v.log_ratio_ok)?;
    kv(out, "u_a", num(v.u_a))?;
    kv(out, "check.u_a", v.u_a_ok)?;
    if !v.all_pass() {
        return Ok(EXIT_VALIDATION);
    }
    let bg = integrate_background(&gas, &inlet, &rc.geo, rc.solver.nr)?;
    kv(out, "nr", bg.len())?;
    kv(out, "msq_exit", num(bg.msq[bg.len() - 1]))?;
    kv(out, "mass_flux_error", num(bg.mass_flux_error()))?;
    kv(out, "bernoulli_gap", num(bg.bernoulli_gap()))?;
    kv(out, "msq_increasing", bg.msq_increasing())?;
    kv(out, "mu_r", num(positivity_weight(&bg).1))?;
    if let Some(p) = path {
        io::write_background(p, &bg)?;
    }
    Ok(EXIT_OK)
}

fn linear(config: &Path, manufactured: bool, out: &mut dyn Write) -> Result<i32> {
    let rc = RunConfig::from_file(config)?;
    let gas = rc.gas()?;
    let inlet = rc.inlet(&gas)?;
    let bg = integrate_background(&gas, &inlet, &rc.geo, rc.solver.nr)?;
    let bar = assemble_bar_coefficients(&bg)?;
    kv(out, "bar.supersonic", bar.report.supersonic)?;
    kv(out, "bar.mu0_prime", num(bar.report.mu0_prime))?;
    kv(out, "bar.c1_positive", bar.report.c1_positive)?;
    kv(out, "bar.c2_negative", bar.report.c2_negative)?;
    let grid = crate::domain::Grid::new(&rc.geo, rc.solver.nr, rc.solver.ntheta())?;
    let state = assemble_state_coefficients(&bg, &bar, &PerturbationState::zeros(&grid), &grid, &gas)?;
    let (_, mu) = positivity_weight(&bg);
    match build_multiplier(&bar, &state, &grid, mu, &rc.solver.multiplier) {
        Ok(g) => {
            kv(out, "multiplier.rbar", num(g.rbar))?;
            kv(out, "multiplier.riccati_residual", num(g.riccati_residual()))?;
        }
        Err(e) => kv(out, "multiplier.error", e)?,
    }
    if !manufactured {
        return Ok(EXIT_OK);
    }
    let mut pass = true;
    for (label, pair) in [("quadratic", Manufactured::Quadratic), ("modulated", Manufactured::Modulated { alpha: 1.0 })] {
        let st = manufactured_study(pair, &gas, &inlet, &rc.geo, rc.solver.m, rc.solver.basis, &rc.linear_nrs, 1)?;
        for run in &st.runs {
            kv(out, &format!("{label}.nr{}.error_h1", run.nr), num(run.error_h1))?;
            kv(out, &format!("{label}.nr{}.energy_ratio", run.nr), num(run.energy_ratio))?;
        }
        kv(out, &format!("{label}.energy_variation"), num(st.energy_variation()))?;
        if label == "modulated" {
            kv(out, "modulated.min_order", num(st.min_order()))?;
            pass &= st.min_order() >= 1.8 && st.energy_variation() < 0.05;
        }
    }
    kv(out, "manufactured.pass", pass)?;
    Ok(if pass { EXIT_OK } else { EXIT_VALIDATION })
}

fn solve(config: &Path, dir: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    let rc = RunConfig::from_file(config)?;
    let pb = rc.problem()?;
    let (flow, report) = solve_problem(&pb)?;
    let text = report.to_kv();
    write!(out, "{text}")?;
    if let Some(d) = dir {
        io::write_state(d, &pb.grid, &flow)?;
        std::fs::write(d.join(REPORT_FILE), &text)?;
    }
    Ok(EXIT_OK)
}

fn verify(dir: &Path, config: &Path, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let rc = RunConfig::from_file(config)?;
    let pb = rc.problem()?;
    let state = io::read_state(dir, &pb.grid)?;
    let res = full_system_residual(&state, &pb.bg, &pb.gas, &pb.grid)?;
    for (name, v) in Residuals::NAMES.iter().zip(res.as_array()) {
        kv(out, &format!("residual.{name}"), num(v))?;
    }
    kv(out, "residual.max", num(res.max()))?;
    let rp = dir.join(REPORT_FILE);
    if !rp.exists() {
        return Ok(EXIT_OK);
    }
    let stored = parse_kv(&std::fs::read_to_string(&rp)?, &rp.display().to_string())?;
    let mut worst = 0.0f64;
    for (name, v) in Residuals::NAMES.iter().zip(res.as_array()) {
        let key = format!("residual.{name}");
        let s = stored.get(&key).ok_or_else(|| Error::Parse { file: rp.display().to_string(), line: 0, msg: format!("missing `{key}`") })?;
        let r: f64 = s.parse().map_err(|_| Error::Parse { file: rp.display().to_string(), line: 0, msg: format!("`{key}`: `{s}` is not a number") })?;
        worst = worst.max((r - v).abs());
    }
    kv(out, "report_gap", num(worst))?;
    if worst > 1e-14 {
        writeln!(err, "residuals differ from the stored report by {worst:e}")?;
        return Ok(EXIT_VALIDATION);
    }
    Ok(EXIT_OK)
}

/// Sweep concurrency from `NOZZLE_EP_THREADS` (default 1).
pub fn sweep_threads() -> Result<usize> {
    match std::env::var("NOZZLE_EP_THREADS") {
        Err(_) => Ok(1),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Error::param("NOZZLE_EP_THREADS", format!("`{s}` is not a positive integer"))),
        },
    }
}

/// Outcome of one sweep point: `Some(σ)` when the solve converged.
fn sweep_point(rc: &RunConfig, target: &SweepTarget, x: f64) -> Option<f64> {
    let mut rc = rc.clone();
    match target {
        SweepTarget::Param(name) => rc.set_param(name, x),
        SweepTarget::EntranceField => rc.e_entrance = x,
    }
    let pb = rc.problem().ok()?;
    let (_, report) = solve_problem(&pb).ok()?;
    Some(report.sigma.total())
}

fn sweep(config: &Path, out: &mut dyn Write) -> Result<i32> {
    let rc = RunConfig::from_file(config)?;
    let sw = rc.sweep.clone().ok_or_else(|| Error::Config { line: 0, msg: "`sweep` needs `sweep.target`, `sweep.lo`, `sweep.hi`".into() })?;
    let threads = sweep_threads()?;
    let (mut lo, mut hi) = (sw.lo, sw.hi);
    let Some(mut best_sigma) = sweep_point(&rc, &sw.target, lo) else {
        kv(out, "sweep.error", "lower bracket does not converge")?;
        return Ok(EXIT_SOLVER);
    };
    for _ in 0..sw.steps {
        let xs: Vec<f64> = (1..=threads).map(|k| lo + (hi - lo) * k as f64 / (threads + 1) as f64).collect();
        let results: Vec<Option<f64>> = std::thread::scope(|s| {
            let handles: Vec<_> = xs.iter().map(|&x| s.spawn({
                let (rc, t) = (&rc, &sw.target);
                move || sweep_point(rc, t, x)
            })).collect();
            handles.into_iter().map(|h| h.join().unwrap_or(None)).collect()
        });
        match results.iter().position(Option::is_none) {
            Some(0) => hi = xs[0],
            Some(f) => {
                lo = xs[f - 1];
                best_sigma = results[f - 1].unwrap();
                hi = xs[f];
            }
            None => {
                lo = xs[threads - 1];
                best_sigma = results[threads - 1].unwrap();
            }
        }
    }
    kv(out, "sweep.threads", threads)?;
    kv(out, "sweep.converged", num(lo))?;
    kv(out, "sweep.failed", num(hi))?;
    kv(out, "sweep.sigma", num(best_sigma))?;
    Ok(EXIT_OK)
}

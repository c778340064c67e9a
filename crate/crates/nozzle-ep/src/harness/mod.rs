//! Residual checks, diagnostics reports, file formats and the command-line front end.

pub mod cli;
pub mod configfile;
pub mod io;
pub mod report;
pub mod residual;

pub use configfile::{ProfileSources, RunConfig, SweepConfig, SweepTarget};
pub use report::{parse_kv, DiagnosticsReport};
pub use residual::{full_system_residual, supersonic_margin, vorticity_identity_residual, Residuals};

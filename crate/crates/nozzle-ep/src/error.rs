use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("unsupported derivative order {0} (max 2)")]
    UnsupportedOrder(usize),

    #[error("truncation m = {m} aliases on {ntheta} angular nodes (need m < ntheta/2)")]
    Aliasing { m: usize, ntheta: usize },

    #[error("sonic singularity: |M^2 - 1| = {gap:.3e} at r = {r}")]
    SonicSingularity { r: f64, gap: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("background march aborted at r = {r}: Mach number crossed 1 (M^2 = {msq})")]
    SonicCrossing { r: f64, msq: f64 },

    #[error("background march diverged at r = {r} (M^2 = {msq})")]
    Divergence { r: f64, msq: f64 },

    #[error("invalid background: {0}")]
    InvalidBackground(String),

    #[error("vacuum at node ({i}, {j}): enthalpy argument {value:.6e} <= 0")]
    Vacuum { i: usize, j: usize, value: f64 },

    #[error("stagnation at node ({i}, {j}): U = {value:.6e}")]
    Stagnation { i: usize, j: usize, value: f64 },

    #[error("multiplier depth bound {rbar:.6e} does not exceed R = {depth}")]
    DomainTooDeep { rbar: f64, depth: f64 },

    #[error("energy slack lambda0 = {lambda0} must exceed z* = {zstar:.6e}")]
    SlackTooSmall { lambda0: f64, zstar: f64 },

    #[error("multiplier data invalid: {0}")]
    MultiplierData(String),

    #[error("singular linear system (pivot {pivot:.3e} at row {row}, condition estimate {cond:.3e})")]
    SingularSystem { row: usize, pivot: f64, cond: f64 },

    #[error("mode {mode} system is near-singular (pivot {pivot:.3e})")]
    ModeSingular { mode: usize, pivot: f64 },

    #[error("field is not curl-free: discrete curl {curl:.3e} exceeds {tol:.1e}")]
    NotIntegrable { curl: f64, tol: f64 },

    #[error("inlet stream function is not increasing at node {0}")]
    NonMonotone(usize),

    #[error("streamline escape at node ({i}, {j}): w = {w} outside [{lo}, {hi}]")]
    StreamlineEscape { i: usize, j: usize, w: f64, lo: f64, hi: f64 },

    #[error("ratio undefined: zero denominator")]
    UndefinedRatio,

    #[error("boundary data incompatible: {0}")]
    Incompatible(String),

    #[error("{0}")]
    Unsupported(String),

    #[error("{stage} iteration did not converge in {iterations} steps (last increment {last:.3e})")]
    NonConvergence {
        stage: &'static str,
        iterations: usize,
        last: f64,
        history: Vec<f64>,
    },

    #[error("supersonic margin lost: kappa = {0:.6e}")]
    RegimeFailure(f64),

    #[error("config error at line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("parse error in {file} line {line}: {msg}")]
    Parse { file: String, line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}

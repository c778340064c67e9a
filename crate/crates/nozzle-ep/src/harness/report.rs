//! Diagnostics of one solve and their plain-text `key = value` form.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::residual::Residuals;
use crate::error::{Error, Result};
use crate::iteration::Sigma;

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsReport {
    pub sigma: Sigma,
    pub residuals: Residuals,
    pub vorticity_residual: f64,
    /// `min(|u|² - c²)`.
    pub kappa: f64,
    /// Largest deviation of a row flux `w(r,θ0) - w(r,-θ0)` from the inlet flux, relative to
    /// it. Removed by row normalization before transport.
    pub mass_flux_drift: f64,
    /// `‖(𝒰,𝒱)‖_{H¹}`, `‖Φ̌‖_{H²}`, `‖(𝒮,𝒦)‖_{H²}`.
    pub deviation: [f64; 3],
    /// Total deviation over `σ`; `None` for `σ = 0`.
    pub deviation_ratio: Option<f64>,
    pub energy_ratio: Option<f64>,
    /// Depth bound of the multiplier, or why it could not be built.
    pub multiplier: std::result::Result<f64, String>,
    pub kappa0: f64,
    pub kappa1: f64,
    pub coefficient_deviation: [f64; 4],
    pub outer_history: Vec<f64>,
    pub inner_histories: Vec<Vec<f64>>,
    pub inner_ratio: f64,
    pub outer_ratio: f64,
    pub set_radius_exceeded: bool,
    pub clamped: f64,
    pub wall_defect: f64,
    pub elapsed_seconds: f64,
}

impl DiagnosticsReport {
    pub fn total_deviation(&self) -> f64 {
        self.deviation.iter().sum()
    }

    pub fn outer_iterations(&self) -> usize {
        self.outer_history.len()
    }

    pub fn inner_iterations(&self) -> usize {
        self.inner_histories.iter().map(Vec::len).sum()
    }

    /// `key = value` lines, every float with 17 significant digits.
    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        put("sigma1", num(self.sigma.sigma1));
        put("sigma2", num(self.sigma.sigma2));
        put("sigma3", num(self.sigma.sigma3));
        put("sigma", num(self.sigma.total()));
        for (name, v) in Residuals::NAMES.iter().zip(self.residuals.as_array()) {
            put(&format!("residual.{name}"), num(v));
        }
        put("residual.max", num(self.residuals.max()));
        put("residual.vorticity", num(self.vorticity_residual));
        put("kappa", num(self.kappa));
        put("mass_flux_drift", num(self.mass_flux_drift));
        put("deviation.uv_h1", num(self.deviation[0]));
        put("deviation.phi_h2", num(self.deviation[1]));
        put("deviation.sk_h2", num(self.deviation[2]));
        put("deviation.total", num(self.total_deviation()));
        put("deviation_ratio", self.deviation_ratio.map_or("none".into(), num));
        put("energy_ratio", self.energy_ratio.map_or("none".into(), num));
        match &self.multiplier {
            Ok(r) => put("multiplier.rbar", num(*r)),
            Err(e) => put("multiplier.error", e.replace('\n', " ")),
        }
        put("kappa0", num(self.kappa0));
        put("kappa1", num(self.kappa1));
        for (k, v) in ["a11", "a12", "a2", "a22"].iter().zip(self.coefficient_deviation) {
            put(&format!("coefficient_deviation.{k}"), num(v));
        }
        put("outer.iterations", self.outer_iterations().to_string());
        put("outer.history", list(&self.outer_history));
        put("outer.ratio", num(self.outer_ratio));
        put("inner.iterations", self.inner_iterations().to_string());
        for (k, h) in self.inner_histories.iter().enumerate() {
            put(&format!("inner.history.{k}"), list(h));
        }
        put("inner.ratio", num(self.inner_ratio));
        put("set_radius_exceeded", self.set_radius_exceeded.to_string());
        put("clamped", num(self.clamped));
        put("wall_defect", num(self.wall_defect));
        put("elapsed_seconds", num(self.elapsed_seconds));
        s
    }
}

/// Float with 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn list(v: &[f64]) -> String {
    v.iter().map(|x| num(*x)).collect::<Vec<_>>().join(",")
}

/// Parse `key = value` lines; `#` starts a comment.
pub fn parse_kv(text: &str, file: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse { file: file.into(), line: n + 1, msg: format!("expected `key = value`, got `{line}`") })?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

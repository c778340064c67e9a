//! Inlet and exit data as functions of `θ`, their perturbation sizes and wall compatibility.

use std::fmt;
use std::sync::Arc;

use meval::{ContextProvider, Expr, FuncEvalError};
use ndarray::Array1;

use crate::background::BackgroundSolution;
use crate::domain::{norms, GasConfig, Grid, InletState, NozzleGeometry};
use crate::error::{Error, Result};

/// A scalar function of `θ`.
#[derive(Clone)]
pub struct Profile {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    src: String,
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Profile({})", self.src)
    }
}

/// Variables and functions visible to profile expressions.
#[derive(Debug, Clone, Default)]
pub struct Scope {
    vars: Vec<(String, f64)>,
}

impl Scope {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.set(name, value);
        self
    }

    pub fn set(&mut self, name: &str, value: f64) {
        if let Some(e) = self.vars.iter_mut().find(|(n, _)| n == name) {
            e.1 = value;
        } else {
            self.vars.push((name.to_string(), value));
        }
    }
}

impl ContextProvider for Scope {
    fn get_var(&self, name: &str) -> Option<f64> {
        match name {
            "pi" => Some(std::f64::consts::PI),
            "e" => Some(std::f64::consts::E),
            _ => self.vars.iter().find(|(n, _)| n == name).map(|(_, v)| *v),
        }
    }

    fn eval_func(&self, name: &str, args: &[f64]) -> std::result::Result<f64, FuncEvalError> {
        let one = |f: fn(f64) -> f64| match args {
            [x] => Ok(f(*x)),
            [] => Err(FuncEvalError::TooFewArguments),
            _ => Err(FuncEvalError::TooManyArguments),
        };
        match name {
            "sin" => one(f64::sin),
            "cos" => one(f64::cos),
            "tan" => one(f64::tan),
            "asin" => one(f64::asin),
            "acos" => one(f64::acos),
            "atan" => one(f64::atan),
            "sinh" => one(f64::sinh),
            "cosh" => one(f64::cosh),
            "tanh" => one(f64::tanh),
            "exp" => one(f64::exp),
            "ln" => one(f64::ln),
            "sqrt" => one(f64::sqrt),
            "abs" => one(f64::abs),
            "signum" => one(f64::signum),
            "pow" => match args {
                [a, b] => Ok(a.powf(*b)),
                _ => Err(FuncEvalError::NumberArgs(2)),
            },
            _ => Err(FuncEvalError::UnknownFunction),
        }
    }
}

impl Profile {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static, label: impl Into<String>) -> Self {
        Self { f: Arc::new(f), src: label.into() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_| c, format!("{c:e}"))
    }

    /// Expression in the variable `theta`, e.g. `u0 + 1e-3*cos(pi*theta/theta0)`.
    pub fn parse(src: &str, scope: &Scope) -> Result<Self> {
        let expr: Expr = src.parse().map_err(|e| Error::Unsupported(format!("expression `{src}`: {e}")))?;
        let scope = scope.clone().with("theta", 0.0);
        expr.eval_with_context(&scope).map_err(|e| Error::Unsupported(format!("expression `{src}`: {e}")))?;
        let label = src.to_string();
        let f = move |t: f64| {
            let local = (("theta", t), &scope);
            expr.eval_with_context(local).unwrap_or(f64::NAN)
        };
        Ok(Self::new(f, label))
    }

    #[inline]
    pub fn eval(&self, theta: f64) -> f64 {
        (self.f)(theta)
    }

    pub fn source(&self) -> &str {
        &self.src
    }

    pub fn sample(&self, theta: &Array1<f64>) -> Array1<f64> {
        theta.mapv(|t| self.eval(t))
    }

    /// Central-difference derivative of order `k ≤ 4` at `θ`, offset by `base` before
    /// differencing to limit cancellation.
    pub fn derivative(&self, theta: f64, k: usize, base: f64) -> f64 {
        let h = PROFILE_STEP;
        let f = |x: f64| self.eval(x) - base;
        match k {
            0 => f(theta) + base,
            1 => (f(theta + h) - f(theta - h)) / (2.0 * h),
            2 => (f(theta + h) - 2.0 * f(theta) + f(theta - h)) / (h * h),
            3 => (f(theta + 2.0 * h) - 2.0 * f(theta + h) + 2.0 * f(theta - h) - f(theta - 2.0 * h)) / (2.0 * h * h * h),
            4 => (f(theta + 2.0 * h) - 4.0 * f(theta + h) + 6.0 * f(theta) - 4.0 * f(theta - h) + f(theta - 2.0 * h)) / (h * h * h * h),
            _ => f64::NAN,
        }
    }
}

/// Step of profile differences.
pub const PROFILE_STEP: f64 = 2e-3;

/// Entrance data `(U_en, V_en, E_en, 𝒦_en, S_en)` and exit potential `Φ_ex`.
#[derive(Debug, Clone)]
pub struct BoundaryData {
    pub u_en: Profile,
    pub v_en: Profile,
    pub e_en: Profile,
    pub k_en: Profile,
    pub s_en: Profile,
    pub phi_ex: Profile,
}

/// Reference values the boundary data perturb.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reference {
    pub u0: f64,
    pub e0: f64,
    pub s0: f64,
    pub phi_r: f64,
}

impl Reference {
    pub fn new(inlet: &InletState, bg: &BackgroundSolution) -> Self {
        Self { u0: inlet.u0, e0: inlet.e_entrance, s0: inlet.s0, phi_r: bg.phi[bg.len() - 1] }
    }
}

/// Perturbation sizes `σ1 + σ2 + σ3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sigma {
    pub sigma1: f64,
    pub sigma2: f64,
    pub sigma3: f64,
}

impl Sigma {
    pub fn total(&self) -> f64 {
        self.sigma1 + self.sigma2 + self.sigma3
    }
}

impl BoundaryData {
    /// Data that reproduce the background exactly.
    pub fn background(r: &Reference) -> Self {
        Self {
            u_en: Profile::constant(r.u0),
            v_en: Profile::constant(0.0),
            e_en: Profile::constant(r.e0),
            k_en: Profile::constant(0.0),
            s_en: Profile::constant(r.s0),
            phi_ex: Profile::constant(r.phi_r),
        }
    }

    /// Variables `u0, e0, s0, phi_r, theta0, r1, r2` for profile expressions.
    pub fn scope(r: &Reference, geo: &NozzleGeometry) -> Scope {
        Scope::new()
            .with("u0", r.u0)
            .with("e0", r.e0)
            .with("s0", r.s0)
            .with("phi_r", r.phi_r)
            .with("theta0", geo.theta0)
            .with("r1", geo.r1)
            .with("r2", geo.r2)
    }

    fn deviations(&self, r: &Reference) -> [(&Profile, f64); 6] {
        [(&self.u_en, r.u0), (&self.v_en, 0.0), (&self.e_en, r.e0), (&self.phi_ex, r.phi_r), (&self.k_en, 0.0), (&self.s_en, r.s0)]
    }

    /// `σ1 = ‖b - b0‖_{H²}`, `σ2` the `C³` deviation of `(U_en, V_en, E_en, Φ_ex)`, `σ3` the
    /// `C⁴` deviation of `(𝒦_en, S_en)`, with derivatives by central differences at the nodes.
    pub fn sigma(&self, r: &Reference, gas: &GasConfig, grid: &Grid) -> Result<Sigma> {
        let sigma1 = match &gas.b_field {
            Some(b) => norms::discrete_norm(&(b - gas.b0), grid, 2)?,
            None => 0.0,
        };
        let dev = self.deviations(r);
        let ck = |p: &Profile, base: f64, k: usize| -> f64 {
            (0..=k).map(|l| grid.theta.iter().map(|t| (p.derivative(*t, l, base) - if l == 0 { base } else { 0.0 }).abs()).fold(0.0, f64::max)).sum()
        };
        let sigma2 = dev[..4].iter().map(|(p, b)| ck(p, *b, 3)).sum();
        let sigma3 = dev[4..].iter().map(|(p, b)| ck(p, *b, 4)).sum();
        Ok(Sigma { sigma1, sigma2, sigma3 })
    }

    /// Largest violation of the wall compatibility conditions: `U_en'`, `V_en`, `V_en''`, and
    /// first and third derivatives of `E_en`, `Φ_ex`, `𝒦_en`, `S_en` at `θ = ±θ0`.
    pub fn compatibility_defect(&self, r: &Reference, theta0: f64) -> f64 {
        let mut worst = 0.0f64;
        for t in [-theta0, theta0] {
            worst = worst.max(self.u_en.derivative(t, 1, r.u0).abs());
            worst = worst.max(self.v_en.eval(t).abs());
            worst = worst.max(self.v_en.derivative(t, 2, 0.0).abs());
            for (p, b) in [(&self.e_en, r.e0), (&self.phi_ex, r.phi_r), (&self.k_en, 0.0), (&self.s_en, r.s0)] {
                worst = worst.max(p.derivative(t, 1, b).abs());
                worst = worst.max(p.derivative(t, 3, b).abs());
            }
        }
        worst
    }

    /// Fails when the compatibility defect exceeds `tol` or `U_en` is not positive.
    pub fn check(&self, r: &Reference, grid: &Grid, tol: f64) -> Result<()> {
        let d = self.compatibility_defect(r, grid.theta[grid.ntheta - 1]);
        if !(d <= tol) {
            return Err(Error::Incompatible(format!("wall derivative defect {d:.3e} exceeds {tol:.1e}")));
        }
        if let Some(t) = grid.theta.iter().find(|t| !(self.u_en.eval(**t) > 0.0)) {
            return Err(Error::Incompatible(format!("U_en <= 0 at theta = {t}")));
        }
        Ok(())
    }

    /// Reflected data `θ ↦ -θ` for every profile.
    pub fn reflected(&self) -> Self {
        let refl = |p: &Profile, sign: f64| {
            let q = p.clone();
            Profile::new(move |t| sign * q.eval(-t), format!("reflect({})", p.source()))
        };
        Self {
            u_en: refl(&self.u_en, 1.0),
            v_en: refl(&self.v_en, -1.0),
            e_en: refl(&self.e_en, 1.0),
            k_en: refl(&self.k_en, 1.0),
            s_en: refl(&self.s_en, 1.0),
            phi_ex: refl(&self.phi_ex, 1.0),
        }
    }
}

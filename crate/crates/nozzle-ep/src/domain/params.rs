//! Physical constants, nozzle geometry and entrance state.

use ndarray::Array2;

use crate::error::{Error, Result};

/// Gas constants and the ion background density.
#[derive(Debug, Clone)]
pub struct GasConfig {
    pub gamma: f64,
    pub b0: f64,
    /// Optional background density field on the solver grid; `b0` everywhere when absent.
    pub b_field: Option<Array2<f64>>,
}

impl GasConfig {
    pub fn new(gamma: f64, b0: f64) -> Result<Self> {
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(Error::param("gamma", format!("{gamma} must exceed 1")));
        }
        if (gamma - 2.0).abs() <= 1e-9 {
            return Err(Error::param("gamma", "gamma = 2 is excluded"));
        }
        if !(b0 > 0.0) || !b0.is_finite() {
            return Err(Error::param("b0", format!("{b0} must be positive")));
        }
        Ok(Self { gamma, b0, b_field: None })
    }

    pub fn with_b_field(mut self, b: Array2<f64>) -> Result<Self> {
        if let Some(v) = b.iter().find(|v| !(**v > 0.0)) {
            return Err(Error::param("b_field", format!("nonpositive value {v}")));
        }
        self.b_field = Some(b);
        Ok(self)
    }

    /// Background density at node (i, j).
    pub fn b_at(&self, i: usize, j: usize) -> f64 {
        match &self.b_field {
            Some(b) => b[[i, j]],
            None => self.b0,
        }
    }
}

/// Annular sector `r1 < r̂ < r2`, `|θ| < θ0`, truncated at depth `R` from the entrance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NozzleGeometry {
    pub r1: f64,
    pub r2: f64,
    pub theta0: f64,
    /// Working depth `R` measured from the entrance `r̂ = r2`.
    pub depth: f64,
}

impl NozzleGeometry {
    pub fn new(r1: f64, r2: f64, theta0: f64, depth: f64) -> Result<Self> {
        if !(r1 > 0.0 && r2 > r1) {
            return Err(Error::param("r1/r2", format!("need 0 < r1 < r2, got {r1}, {r2}")));
        }
        if !(theta0 > 0.0 && theta0 < std::f64::consts::FRAC_PI_2) {
            return Err(Error::param("theta0", format!("{theta0} not in (0, pi/2)")));
        }
        if !(depth > 0.0 && depth < r2 - r1) {
            return Err(Error::param("depth", format!("{depth} not in (0, r2 - r1)")));
        }
        Ok(Self { r1, r2, theta0, depth })
    }

    /// Physical radius `r̂ = r2 - r`.
    #[inline]
    pub fn rhat(&self, r: f64) -> f64 {
        self.r2 - r
    }

    /// `ln(r2/r1)` and its admissible bound `(γ+1)/(2(γ-1))`.
    pub fn log_ratio(&self, gamma: f64) -> (f64, f64) {
        ((self.r2 / self.r1).ln(), (gamma + 1.0) / (2.0 * (gamma - 1.0)))
    }
}

/// Entrance state with derived flux, entropy and Mach number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InletState {
    pub rho0: f64,
    pub u0: f64,
    pub p0: f64,
    /// Signed radial field at the entrance, used as the initial value of `Ē`.
    pub e_entrance: f64,
    pub j0: f64,
    pub s0: f64,
    pub m0sq: f64,
}

impl InletState {
    pub fn new(rho0: f64, u0: f64, p0: f64, e_entrance: f64, gas: &GasConfig, geo: &NozzleGeometry) -> Result<Self> {
        for (name, v) in [("rho0", rho0), ("u0", u0), ("p0", p0)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::param(name, format!("{v} must be positive")));
            }
        }
        if !e_entrance.is_finite() {
            return Err(Error::param("e0", "must be finite"));
        }
        let g = gas.gamma;
        Ok(Self {
            rho0,
            u0,
            p0,
            e_entrance,
            j0: geo.r2 * rho0 * u0,
            s0: (p0 / rho0.powf(g)).ln(),
            m0sq: rho0 * u0 * u0 / (g * p0),
        })
    }
}

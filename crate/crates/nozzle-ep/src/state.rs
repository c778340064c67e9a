//! Field containers shared by the solver stages.

use ndarray::Array2;

use crate::background::BackgroundSolution;
use crate::domain::{norms, Grid};
use crate::error::Result;

/// Deviations `(𝒰, 𝒱, Φ̌, 𝒮, 𝒦)` from the background `(Ū, 0, Φ̄, S0, 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationState {
    pub u: Array2<f64>,
    pub v: Array2<f64>,
    pub phi: Array2<f64>,
    pub s: Array2<f64>,
    pub k: Array2<f64>,
}

impl PerturbationState {
    pub fn zeros(grid: &Grid) -> Self {
        Self { u: grid.zeros(), v: grid.zeros(), phi: grid.zeros(), s: grid.zeros(), k: grid.zeros() }
    }

    /// Low-order distance `‖(Δ𝒰, Δ𝒱)‖_{L²} + ‖ΔΦ̌‖_{H¹}` between velocity/potential parts.
    pub fn low_norm_distance(&self, other: &Self, grid: &Grid) -> Result<f64> {
        let du = &self.u - &other.u;
        let dv = &self.v - &other.v;
        let dp = &self.phi - &other.phi;
        let l2 = (norms::l2(&du, grid).powi(2) + norms::l2(&dv, grid).powi(2)).sqrt();
        Ok(l2 + norms::discrete_norm(&dp, grid, 1)?)
    }

    /// `‖(Δ𝒮, Δ𝒦)‖_{H¹}`.
    pub fn scalar_distance(&self, other: &Self, grid: &Grid) -> Result<f64> {
        let a = norms::discrete_norm(&(&self.s - &other.s), grid, 1)?;
        let b = norms::discrete_norm(&(&self.k - &other.k), grid, 1)?;
        Ok((a * a + b * b).sqrt())
    }

    /// `(‖(𝒰,𝒱)‖_{H¹}, ‖Φ̌‖_{H²}, ‖(𝒮,𝒦)‖_{H²})`.
    pub fn norms(&self, grid: &Grid) -> Result<(f64, f64, f64)> {
        let uv = (norms::discrete_norm(&self.u, grid, 1)?.powi(2) + norms::discrete_norm(&self.v, grid, 1)?.powi(2)).sqrt();
        let p = norms::discrete_norm(&self.phi, grid, 2)?;
        let sk = (norms::discrete_norm(&self.s, grid, 2)?.powi(2) + norms::discrete_norm(&self.k, grid, 2)?.powi(2)).sqrt();
        Ok((uv, p, sk))
    }
}

/// Total fields `(U, V, Φ, S, 𝒦)` on the solver grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub u: Array2<f64>,
    pub v: Array2<f64>,
    pub phi: Array2<f64>,
    pub s: Array2<f64>,
    pub k: Array2<f64>,
}

impl FlowState {
    /// The background itself as a two-dimensional state.
    pub fn from_background(bg: &BackgroundSolution, grid: &Grid) -> Self {
        Self {
            u: grid.radial(&bg.u),
            v: grid.zeros(),
            phi: grid.radial(&bg.phi),
            s: Array2::from_elem((grid.nr, grid.ntheta), bg.s0),
            k: grid.zeros(),
        }
    }

    pub fn from_perturbation(bg: &BackgroundSolution, grid: &Grid, p: &PerturbationState) -> Self {
        let base = Self::from_background(bg, grid);
        Self { u: base.u + &p.u, v: p.v.clone(), phi: base.phi + &p.phi, s: base.s + &p.s, k: p.k.clone() }
    }

    pub fn to_perturbation(&self, bg: &BackgroundSolution, grid: &Grid) -> PerturbationState {
        let base = Self::from_background(bg, grid);
        PerturbationState {
            u: &self.u - &base.u,
            v: self.v.clone(),
            phi: &self.phi - &base.phi,
            s: &self.s - &base.s,
            k: self.k.clone(),
        }
    }
}

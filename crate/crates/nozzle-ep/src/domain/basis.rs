//! Angular eigenbases on `[-θ0, θ0]`.

use std::f64::consts::PI;

use ndarray::{Array1, Array2, ArrayView1};

use super::grid::Grid;
use super::quad::dot_trap;
use crate::error::{Error, Result};

/// Which Neumann eigenfunctions the cosine basis carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BasisKind {
    /// `η_k ∝ cos(kπθ/θ0)`: reflection-even functions only.
    #[default]
    Even,
    /// `η_k ∝ cos(kπ(θ+θ0)/(2θ0))`: the complete Neumann eigenbasis.
    Full,
}

/// Orthonormal Neumann cosine basis `η_0..η_m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosineBasis {
    pub theta0: f64,
    pub m: usize,
    pub kind: BasisKind,
}

impl CosineBasis {
    pub fn new(theta0: f64, m: usize) -> Self {
        Self { theta0, m, kind: BasisKind::Even }
    }

    pub fn with_kind(theta0: f64, m: usize, kind: BasisKind) -> Self {
        Self { theta0, m, kind }
    }

    pub fn len(&self) -> usize {
        self.m + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    fn wavenumber(&self, k: usize) -> f64 {
        match self.kind {
            BasisKind::Even => k as f64 * PI / self.theta0,
            BasisKind::Full => k as f64 * PI / (2.0 * self.theta0),
        }
    }

    #[inline]
    fn phase(&self, theta: f64) -> f64 {
        match self.kind {
            BasisKind::Even => theta,
            BasisKind::Full => theta + self.theta0,
        }
    }

    #[inline]
    fn amp(&self, k: usize) -> f64 {
        if k == 0 {
            (0.5 / self.theta0).sqrt()
        } else {
            (1.0 / self.theta0).sqrt()
        }
    }

    /// Eigenvalue `υ_k` with `-η_k'' = υ_k η_k`.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let w = self.wavenumber(k);
        w * w
    }

    pub fn eta(&self, k: usize, theta: f64) -> f64 {
        self.amp(k) * (self.wavenumber(k) * self.phase(theta)).cos()
    }

    pub fn deta(&self, k: usize, theta: f64) -> f64 {
        let w = self.wavenumber(k);
        -self.amp(k) * w * (w * self.phase(theta)).sin()
    }

    /// `(m+1) x ntheta` table of `η_k(θ_j)`.
    pub fn table(&self, theta: &Array1<f64>) -> Array2<f64> {
        Array2::from_shape_fn((self.len(), theta.len()), |(k, j)| self.eta(k, theta[j]))
    }

    pub fn dtable(&self, theta: &Array1<f64>) -> Array2<f64> {
        Array2::from_shape_fn((self.len(), theta.len()), |(k, j)| self.deta(k, theta[j]))
    }

    pub fn check_aliasing(&self, ntheta: usize) -> Result<()> {
        if 2 * self.m >= ntheta {
            return Err(Error::Aliasing { m: self.m, ntheta });
        }
        Ok(())
    }

    /// Coefficients `⟨f, η_k⟩` for `k = 0..m`.
    pub fn project(&self, f: ArrayView1<f64>, grid: &Grid) -> Result<Array1<f64>> {
        if f.len() != grid.ntheta {
            return Err(Error::SizeMismatch { expected: grid.ntheta, got: f.len() });
        }
        self.check_aliasing(grid.ntheta)?;
        let tab = self.table(&grid.theta);
        Ok(Array1::from_shape_fn(self.len(), |k| dot_trap(f, tab.row(k), grid.dtheta)))
    }

    /// `Σ c_k η_k(θ_j)` on the angular nodes.
    pub fn synthesize(&self, c: ArrayView1<f64>, grid: &Grid) -> Array1<f64> {
        let tab = self.table(&grid.theta);
        let mut out = Array1::zeros(grid.ntheta);
        for (k, ck) in c.iter().enumerate().take(self.len()) {
            out.scaled_add(*ck, &tab.row(k));
        }
        out
    }
}

/// Dirichlet sine basis `ζ_k(θ) = sin(kπ(θ+θ0)/(2θ0))`, `k = 1..=n`, with `‖ζ_k‖² = θ0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineBasis {
    pub theta0: f64,
    pub n: usize,
}

impl SineBasis {
    pub fn new(theta0: f64, n: usize) -> Self {
        Self { theta0, n }
    }

    #[inline]
    pub fn wavenumber(&self, k: usize) -> f64 {
        k as f64 * PI / (2.0 * self.theta0)
    }

    pub fn zeta(&self, k: usize, theta: f64) -> f64 {
        (self.wavenumber(k) * (theta + self.theta0)).sin()
    }

    pub fn dzeta(&self, k: usize, theta: f64) -> f64 {
        let w = self.wavenumber(k);
        w * (w * (theta + self.theta0)).cos()
    }

    /// Rows `k = 1..=n` (row index `k - 1`).
    pub fn table(&self, theta: &Array1<f64>) -> Array2<f64> {
        let mut t = Array2::from_shape_fn((self.n, theta.len()), |(k, j)| self.zeta(k + 1, theta[j]));
        // endpoints vanish exactly
        let last = theta.len() - 1;
        t.column_mut(0).fill(0.0);
        t.column_mut(last).fill(0.0);
        t
    }

    pub fn dtable(&self, theta: &Array1<f64>) -> Array2<f64> {
        Array2::from_shape_fn((self.n, theta.len()), |(k, j)| self.dzeta(k + 1, theta[j]))
    }

    pub fn check_aliasing(&self, ntheta: usize) -> Result<()> {
        if self.n + 1 >= ntheta {
            return Err(Error::Aliasing { m: self.n, ntheta });
        }
        Ok(())
    }
}

use ndarray::{Array1, Array2};

use super::params::NozzleGeometry;
use crate::error::{Error, Result};

/// Uniform tensor grid on `[0, R] x [-θ0, θ0]`. Fields are `Array2` indexed `[i_r, j_theta]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub nr: usize,
    pub ntheta: usize,
    pub r: Array1<f64>,
    pub theta: Array1<f64>,
    pub dr: f64,
    pub dtheta: f64,
    /// `r̂ = r2 - r` at every radial node.
    pub rhat: Array1<f64>,
}

impl Grid {
    pub fn new(geo: &NozzleGeometry, nr: usize, ntheta: usize) -> Result<Self> {
        if nr < 3 {
            return Err(Error::param("nr", format!("{nr} < 3")));
        }
        if ntheta < 3 {
            return Err(Error::param("ntheta", format!("{ntheta} < 3")));
        }
        let r = Array1::linspace(0.0, geo.depth, nr);
        let mut theta = Array1::linspace(-geo.theta0, geo.theta0, ntheta);
        // exact symmetry of the angular nodes about 0
        for j in 0..ntheta / 2 {
            let v = 0.5 * (theta[ntheta - 1 - j] - theta[j]);
            theta[j] = -v;
            theta[ntheta - 1 - j] = v;
        }
        if ntheta % 2 == 1 {
            theta[ntheta / 2] = 0.0;
        }
        let rhat = r.mapv(|x| geo.rhat(x));
        Ok(Self {
            nr,
            ntheta,
            dr: geo.depth / (nr - 1) as f64,
            dtheta: 2.0 * geo.theta0 / (ntheta - 1) as f64,
            r,
            theta,
            rhat,
        })
    }

    pub fn zeros(&self) -> Array2<f64> {
        Array2::zeros((self.nr, self.ntheta))
    }

    /// Field from a function of `(r, θ)`.
    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> Array2<f64> {
        Array2::from_shape_fn((self.nr, self.ntheta), |(i, j)| f(self.r[i], self.theta[j]))
    }

    /// Field that depends on `r` only.
    pub fn radial(&self, prof: &Array1<f64>) -> Array2<f64> {
        Array2::from_shape_fn((self.nr, self.ntheta), |(i, _)| prof[i])
    }

    pub fn check_field(&self, f: &Array2<f64>) -> Result<()> {
        let (a, b) = f.dim();
        if a != self.nr || b != self.ntheta {
            return Err(Error::SizeMismatch { expected: self.nr * self.ntheta, got: a * b });
        }
        Ok(())
    }
}

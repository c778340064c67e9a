//! Density law, stream function, transport of `S` and `𝒦` from the inlet, and the vorticity
//! source `f3`.

use ndarray::{Array1, Array2, ArrayView1};

use crate::domain::{fd, quad, Grid};
use crate::error::{Error, Result};

/// `(ρ, c²)` from `ρ = ((γ-1)/(γe^S)·(𝒦 + Φ - |u|²/2))^{1/(γ-1)}`.
pub fn density_from_state(
    s: &Array2<f64>,
    k: &Array2<f64>,
    u: &Array2<f64>,
    v: &Array2<f64>,
    phi: &Array2<f64>,
    gamma: f64,
) -> Result<(Array2<f64>, Array2<f64>)> {
    let (nr, nt) = s.dim();
    for f in [k, u, v, phi] {
        if f.dim() != (nr, nt) {
            return Err(Error::SizeMismatch { expected: nr * nt, got: f.len() });
        }
    }
    let mut rho = Array2::zeros((nr, nt));
    let mut csq = Array2::zeros((nr, nt));
    for i in 0..nr {
        for j in 0..nt {
            let (uu, vv) = (u[[i, j]], v[[i, j]]);
            let arg = k[[i, j]] + phi[[i, j]] - 0.5 * (uu * uu + vv * vv);
            if !(arg > 0.0) {
                return Err(Error::Vacuum { i, j, value: arg });
            }
            rho[[i, j]] = density_point(gamma, s[[i, j]], arg);
            csq[[i, j]] = (gamma - 1.0) * arg;
        }
    }
    Ok((rho, csq))
}

/// `ℋ` at one point given the enthalpy argument `𝒦 + Φ - |u|²/2`.
#[inline]
pub fn density_point(gamma: f64, s: f64, arg: f64) -> f64 {
    ((gamma - 1.0) / (gamma * s.exp()) * arg).powf(1.0 / (gamma - 1.0))
}

/// Stream function and the monotone inverse of its inlet trace.
#[derive(Debug, Clone)]
pub struct StreamData {
    pub w: Array2<f64>,
    theta: Array1<f64>,
    /// `w(0, θ_j)`.
    w0: Array1<f64>,
    /// Limited Hermite slopes `dw0/dθ` at the nodes.
    slope: Array1<f64>,
    /// Largest clamped excursion outside the inlet range.
    pub clamped: f64,
    /// Largest relative deviation of a row flux `w(r,θ0) - w(r,-θ0)` from the inlet flux,
    /// measured by [`StreamData::normalize_flux`].
    pub flux_drift: f64,
}

impl StreamData {
    pub fn range(&self) -> (f64, f64) {
        (self.w0[0], self.w0[self.w0.len() - 1])
    }

    /// Rescale every row affinely onto the inlet range, so both walls are streamlines exactly.
    /// Removes the discrete mass-flux drift of an approximately conserving velocity; returns
    /// the drift that was removed.
    pub fn normalize_flux(&mut self) -> f64 {
        let (lo, hi) = self.range();
        let n = self.w.ncols();
        let mut drift = 0.0f64;
        for mut row in self.w.rows_mut() {
            let (a, b) = (row[0], row[n - 1]);
            drift = drift.max(((b - a) - (hi - lo)).abs() / (hi - lo));
            let scale = (hi - lo) / (b - a);
            row.mapv_inplace(|x| lo + (x - a) * scale);
        }
        self.flux_drift = drift;
        drift
    }

    /// Hermite value of `w0` at `θ`.
    pub fn w0_at(&self, theta: f64) -> f64 {
        let j = self.interval_theta(theta);
        self.hermite(j, theta).0
    }

    fn interval_theta(&self, theta: f64) -> usize {
        let n = self.theta.len();
        match self.theta.as_slice().unwrap().binary_search_by(|t| t.partial_cmp(&theta).unwrap()) {
            Ok(j) => j.min(n - 2),
            Err(j) => j.clamp(1, n - 1) - 1,
        }
    }

    fn hermite(&self, j: usize, theta: f64) -> (f64, f64) {
        let h = self.theta[j + 1] - self.theta[j];
        let t = (theta - self.theta[j]) / h;
        let (y0, y1) = (self.w0[j], self.w0[j + 1]);
        let (m0, m1) = (self.slope[j] * h, self.slope[j + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let v = (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * m0 + (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * m1;
        let d = ((6.0 * t2 - 6.0 * t) * y0 + (3.0 * t2 - 4.0 * t + 1.0) * m0 + (-6.0 * t2 + 6.0 * t) * y1 + (3.0 * t2 - 2.0 * t) * m1) / h;
        (v, d)
    }

    /// `θ` with `w0(θ) = w`, to `1e-12` in stream value. `w` must lie in the inlet range.
    pub fn w0_inverse(&self, w: f64) -> f64 {
        let n = self.w0.len();
        if w <= self.w0[0] {
            return self.theta[0];
        }
        if w >= self.w0[n - 1] {
            return self.theta[n - 1];
        }
        let j = match self.w0.as_slice().unwrap().binary_search_by(|x| x.partial_cmp(&w).unwrap()) {
            Ok(j) => return self.theta[j],
            Err(j) => j - 1,
        };
        let (mut lo, mut hi) = (self.theta[j], self.theta[j + 1]);
        let scale = self.w0[n - 1].abs().max(1.0);
        let mut x = lo + (hi - lo) * (w - self.w0[j]) / (self.w0[j + 1] - self.w0[j]);
        for _ in 0..100 {
            let (f, d) = self.hermite(j, x);
            let r = f - w;
            if r.abs() <= 1e-12 * scale {
                break;
            }
            if r > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let xn = if d > 0.0 { x - r / d } else { f64::NAN };
            x = if xn > lo && xn < hi { xn } else { 0.5 * (lo + hi) };
            if hi - lo < 1e-15 * scale {
                break;
            }
        }
        x
    }
}

/// `w(r,θ) = -∫_0^r (ρV)(s,-θ0) ds + ∫_{-θ0}^θ (r̂ρU)(r,t) dt`.
pub fn build_stream_function(rho: &Array2<f64>, u: &Array2<f64>, v: &Array2<f64>, grid: &Grid) -> Result<StreamData> {
    for f in [rho, u, v] {
        grid.check_field(f)?;
    }
    let flux_r = Array2::from_shape_fn(rho.dim(), |(i, j)| grid.rhat[i] * rho[[i, j]] * u[[i, j]]);
    if let Some(j) = flux_r.row(0).iter().position(|x| !(*x > 0.0)) {
        return Err(Error::NonMonotone(j));
    }
    let wall_flux = Array1::from_shape_fn(grid.nr, |i| rho[[i, 0]] * v[[i, 0]]);
    let wall = quad::cumulative_quartic(wall_flux.view(), grid.dr);
    let mut w = grid.zeros();
    for i in 0..grid.nr {
        let line = quad::cumulative_quartic(flux_r.row(i), grid.dtheta);
        w.row_mut(i).assign(&(line - wall[i]));
    }
    let w0 = w.row(0).to_owned();
    if let Some(j) = (1..grid.ntheta).find(|&j| !(w0[j] > w0[j - 1])) {
        return Err(Error::NonMonotone(j));
    }
    let slope = limited_slopes(w0.view(), flux_r.row(0), grid.dtheta);
    Ok(StreamData { w, theta: grid.theta.clone(), w0, slope, clamped: 0.0, flux_drift: 0.0 })
}

/// Fritsch-Carlson limiting of exact nodal slopes so the Hermite interpolant is monotone.
fn limited_slopes(y: ArrayView1<f64>, exact: ArrayView1<f64>, h: f64) -> Array1<f64> {
    let n = y.len();
    let mut m = exact.to_owned();
    for j in 0..n - 1 {
        let delta = (y[j + 1] - y[j]) / h;
        let a = m[j] / delta;
        let b = m[j + 1] / delta;
        let s = a * a + b * b;
        if s > 9.0 {
            let t = 3.0 / s.sqrt();
            m[j] = t * a * delta;
            m[j + 1] = t * b * delta;
        }
    }
    m
}

/// Transported field `q(r,θ) = q_en(w0⁻¹(w(r,θ)))` for every inlet profile in `profiles`.
/// Stream values outside the inlet range by less than `1e-10` (relative) are clamped.
pub fn transport_scalars(stream: &mut StreamData, profiles: &[&dyn Fn(f64) -> f64]) -> Result<Vec<Array2<f64>>> {
    let (lo, hi) = stream.range();
    let tol = 1e-10 * hi.abs().max(lo.abs()).max(1.0);
    let (nr, nt) = stream.w.dim();
    let mut foot = Array2::zeros((nr, nt));
    let mut clamped = 0.0f64;
    for i in 0..nr {
        for j in 0..nt {
            let w = stream.w[[i, j]];
            let excess = (lo - w).max(w - hi);
            if excess > tol {
                return Err(Error::StreamlineEscape { i, j, w, lo, hi });
            }
            if excess > 0.0 {
                clamped = clamped.max(excess);
            }
            foot[[i, j]] = stream.w0_inverse(w.clamp(lo, hi));
        }
    }
    stream.clamped = clamped;
    Ok(profiles.iter().map(|p| foot.mapv(|t| p(t))).collect())
}

/// `f3 = (e^S ρ^{γ-1} S_θ/(γ-1) - 𝒦_θ) / U` with centered `θ`-differences.
pub fn vorticity_source(s: &Array2<f64>, k: &Array2<f64>, rho: &Array2<f64>, u: &Array2<f64>, grid: &Grid, gamma: f64) -> Result<Array2<f64>> {
    for f in [s, k, rho, u] {
        grid.check_field(f)?;
    }
    let st = fd::dtheta(s, grid.dtheta);
    let kt = fd::dtheta(k, grid.dtheta);
    let mut f3 = grid.zeros();
    for i in 0..grid.nr {
        for j in 0..grid.ntheta {
            let uu = u[[i, j]];
            if !(uu > 0.0) {
                return Err(Error::Stagnation { i, j, value: uu });
            }
            let enth = s[[i, j]].exp() * rho[[i, j]].powf(gamma - 1.0) / (gamma - 1.0);
            f3[[i, j]] = (enth * st[[i, j]] - kt[[i, j]]) / uu;
        }
    }
    Ok(f3)
}

/// Four-point Lagrange interpolation of a row sampled on the angular nodes.
pub fn interp_theta(row: ArrayView1<f64>, grid: &Grid, theta: f64) -> f64 {
    let n = grid.ntheta;
    let x = ((theta - grid.theta[0]) / grid.dtheta).clamp(0.0, (n - 1) as f64);
    let base = (x.floor() as usize).saturating_sub(1).min(n - 4);
    let mut s = 0.0;
    for a in 0..4 {
        let mut l = 1.0;
        for b in 0..4 {
            if a != b {
                l *= (x - (base + b) as f64) / (a as f64 - b as f64);
            }
        }
        s += l * row[base + a];
    }
    s
}

/// Characteristic `dθ/dr = V/(r̂U)` from `(0, θ_start)` by RK4 on the radial grid. Midpoint
/// values average the neighbouring rows.
pub fn trace_streamline(u: &Array2<f64>, v: &Array2<f64>, grid: &Grid, theta_start: f64) -> Array1<f64> {
    let slope = |i: usize, frac: f64, th: f64| {
        let ev = |ii: usize| {
            let uu = interp_theta(u.row(ii), grid, th);
            let vv = interp_theta(v.row(ii), grid, th);
            (uu, vv)
        };
        let (u0, v0) = ev(i);
        let (uu, vv, rh) = if frac == 0.0 {
            (u0, v0, grid.rhat[i])
        } else {
            let (u1, v1) = ev(i + 1);
            (u0 + frac * (u1 - u0), v0 + frac * (v1 - v0), grid.rhat[i] - frac * grid.dr)
        };
        vv / (rh * uu)
    };
    let mut out = Array1::zeros(grid.nr);
    let mut th = theta_start;
    out[0] = th;
    let h = grid.dr;
    for i in 0..grid.nr - 1 {
        let k1 = slope(i, 0.0, th);
        let k2 = slope(i, 0.5, th + 0.5 * h * k1);
        let k3 = slope(i, 0.5, th + 0.5 * h * k2);
        let k4 = slope(i + 1, 0.0, th + h * k3);
        th += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out[i + 1] = th;
    }
    out
}

//! Nonlinear remainders `f1, f2, f3` at a frozen state and the homogenized sources `F1, F2, g`.

use ndarray::{Array1, Array2};

use super::Problem;
use crate::domain::fd;
use crate::error::Result;
use crate::linear::coeffs::sound_speed_sq;
use crate::linear::{assemble_state_coefficients, StateCoefficients};
use crate::potentials::{solve_div_potential, DivPotential};
use crate::state::PerturbationState;
use crate::transport::{density_from_state, density_point, vorticity_source};

/// Everything the Galerkin solve and the reconstruction need from one frozen state.
#[derive(Debug, Clone)]
pub struct Rhs {
    pub f1: Array2<f64>,
    pub f2: Array2<f64>,
    pub f3: Array2<f64>,
    /// Shifted sources `𝔣1`, `𝔣2`.
    pub f1_shift: Array2<f64>,
    pub f2_shift: Array2<f64>,
    pub big_f1: Array2<f64>,
    pub big_f2: Array2<f64>,
    pub g: Array1<f64>,
    /// Potential lift `Φ*`.
    pub phi_star: Array2<f64>,
    pub pot: DivPotential,
    pub coeffs: StateCoefficients,
    pub rho: Array2<f64>,
    pub csq: Array2<f64>,
}

/// `frozen` carries `(𝒰*, 𝒱*, Φ̌*)` together with the outer data `(𝒮*, 𝒦*)`.
pub fn assemble_rhs(pb: &Problem, frozen: &PerturbationState) -> Result<Rhs> {
    let (grid, bg, bar) = (&pb.grid, &pb.bg, &pb.bar);
    let gamma = pb.gas.gamma;
    let (nr, nt) = (grid.nr, grid.ntheta);

    // total fields
    let u = &grid.radial(&bg.u) + &frozen.u;
    let phi = &grid.radial(&bg.phi) + &frozen.phi;
    let s = &frozen.s + bg.s0;
    let (rho, csq) = density_from_state(&s, &frozen.k, &u, &frozen.v, &phi, gamma)?;

    let dphi_r = fd::dr(&frozen.phi, grid.dr);
    let dphi_t = fd::dtheta(&frozen.phi, grid.dtheta);
    let mut f1 = Array2::zeros((nr, nt));
    let mut f2 = Array2::zeros((nr, nt));
    for i in 0..nr {
        let (ub, cb, rh) = (bg.u[i], bg.csq[i], grid.rhat[i]);
        let c0 = sound_speed_sq(gamma, 0.0, ub, 0.0, bg.phi[i]);
        let a11_0 = c0 - ub * ub;
        let b_0 = -c0 * ub / rh - ub * bg.e[i];
        let rho_0 = density_point(gamma, bg.s0, bg.phi[i] - 0.5 * ub * ub);
        for j in 0..nt {
            let (uu, vv, c) = (u[[i, j]], frozen.v[[i, j]], csq[[i, j]]);
            let a11 = c - uu * uu;
            let b = -c * uu / rh + uu * (-bg.e[i] + dphi_r[[i, j]]) + vv * dphi_t[[i, j]] / rh;
            let (pu, pp) = (frozen.u[[i, j]], frozen.phi[[i, j]]);
            f1[[i, j]] = -(a11 - a11_0) * bg.du[i] / cb - (b - b_0) / cb + bar.a1[i] * pu + bar.b1[i] * pp + bar.b2[i] * dphi_r[[i, j]];
            let db = pb.gas.b_at(i, j) - pb.gas.b0;
            f2[[i, j]] = rho[[i, j]] - rho_0 - db + bar.c1[i] * pu + bar.c2[i] * pp;
        }
    }
    let f3 = vorticity_source(&s, &frozen.k, &rho, &u, grid, gamma)?;
    let pot = solve_div_potential(&f3, grid, &pb.sine)?;
    let coeffs = assemble_state_coefficients(bg, bar, frozen, grid, &pb.gas)?;

    let d = &pb.data;
    let (r2, depth, e0) = (pb.geo.r2, pb.geo.depth, pb.reference.e0);
    let mut f1_shift = f1.clone();
    let mut f2_shift = f2.clone();
    let mut big_f1 = Array2::zeros((nr, nt));
    let mut big_f2 = Array2::zeros((nr, nt));
    let mut phi_star = Array2::zeros((nr, nt));
    for i in 0..nr {
        let rh = grid.rhat[i];
        let r = grid.r[i];
        for j in 0..nt {
            let k = &coeffs;
            let shift1 = -k.ah21[[i, j]] * pot.phi_rr[[i, j]]
                + k.a12[[i, j]] * pot.phi_tt[[i, j]] / rh
                + (k.a11[[i, j]] / rh - k.ah22[[i, j]]) * pot.phi_rt[[i, j]]
                + (k.a11[[i, j]] / (rh * rh) + bar.a1[i] / rh) * pot.phi_theta[[i, j]];
            f1_shift[[i, j]] += shift1;
            f2_shift[[i, j]] += bar.c1[i] * pot.phi_theta[[i, j]] / rh;
            let de = e0 - d.e_en[j];
            let ps = (r - depth) * de + (d.phi_ex[j] - pb.reference.phi_r);
            phi_star[[i, j]] = ps;
            big_f1[[i, j]] = f1_shift[[i, j]] - r2 * k.a22[[i, j]] * d.dv_en[j] - k.a2[[i, j]] * r2 * d.v_en[j] - bar.b1[i] * ps - bar.b2[i] * de;
            big_f2[[i, j]] = f2_shift[[i, j]] - ((depth - r) * d.d2e_en[j] + d.d2phi_ex[j]) / (rh * rh) + de / rh - bar.c2[i] * ps;
        }
    }
    let g = Array1::from_shape_fn(nt, |j| d.u_en[j] - pb.reference.u0 + pot.phi_theta[[0, j]] / r2);
    Ok(Rhs { f1, f2, f3, f1_shift, f2_shift, big_f1, big_f2, g, phi_star, pot, coeffs, rho, csq })
}

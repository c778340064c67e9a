mod common;

use std::f64::consts::{FRAC_PI_4, PI};

use nalgebra::{DMatrix, DVector};
use ndarray::{Array1, Array2};
use nozzle_ep::domain::{fd, norms, Grid, SineBasis};
use nozzle_ep::potentials::{curl_potential, discrete_curl, shift_velocity, solve_div_potential, solve_sine_mode, DivPotential};
use nozzle_ep::Error;
use proptest::prelude::*;

use common::fixture;

const T0: f64 = FRAC_PI_4;

fn grid(nr: usize, nt: usize) -> Grid {
    let (_, geo, _) = fixture();
    Grid::new(&geo, nr, nt).unwrap()
}

fn zeta(k: usize, t: f64) -> f64 {
    (k as f64 * PI * (t + T0) / (2.0 * T0)).sin()
}

#[test]
fn zero_source_gives_zero_potential() {
    let g = grid(33, 33);
    let pot = solve_div_potential(&g.zeros(), &g, &SineBasis::new(T0, 16)).unwrap();
    assert!(common::max_abs(&pot.phi) == 0.0 && common::max_abs(&pot.phi_r) == 0.0);
}

#[test]
fn single_mode_matches_dense_ghost_point_solve() {
    let g = grid(65, 65);
    let c = 0.7;
    let f3 = g.sample(|r, t| (1.0 - r) * zeta(2, t) * c);
    let sine = SineBasis::new(T0, 16);
    let pot = solve_div_potential(&f3, &g, &sine).unwrap();
    let n = g.nr;
    let h = g.dr;
    let w = 2.0 * PI / (2.0 * T0);
    let mut a = DMatrix::<f64>::zeros(n, n);
    let mut b = DVector::<f64>::zeros(n);
    for i in 0..n {
        let rh = g.rhat[i];
        b[i] = c;
        a[(i, i)] = -2.0 / (h * h) - w * w / (rh * rh);
        // mirrored ghost nodes at both ends
        let (lo, hi) = (if i == 0 { 1 } else { i - 1 }, if i == n - 1 { n - 2 } else { i + 1 });
        let drift = if i == 0 || i == n - 1 { 0.0 } else { 0.5 / (h * rh) };
        a[(i, lo)] += 1.0 / (h * h) + drift;
        a[(i, hi)] += 1.0 / (h * h) - drift;
    }
    let x = a.lu().solve(&b).unwrap();
    for i in 0..n {
        assert!((pot.modes[[i, 1]] - x[i]).abs() < 1e-9, "{} vs {}", pot.modes[[i, 1]], x[i]);
        for k in (0..16).filter(|k| *k != 1) {
            assert!(pot.modes[[i, k]].abs() < 1e-10);
        }
    }
    // the public single-mode routine agrees too
    let src = Array1::from_elem(n, c).mapv(|v| v) * &g.rhat;
    let col = solve_sine_mode(&src, &g.rhat, h, w, 2).unwrap();
    for i in 0..n {
        assert!((col[i] - x[i]).abs() < 1e-12);
    }
}

fn manufactured_error(nr: usize) -> f64 {
    let (_, geo, _) = fixture();
    let r_max = geo.depth;
    let g = grid(nr, 65);
    let w = 2.0 * PI / (2.0 * T0);
    let k = PI / r_max;
    let f3 = g.sample(|r, t| {
        let rh = 1.0 - r;
        let (c, dc, ddc) = ((k * r).cos(), -k * (k * r).sin(), -k * k * (k * r).cos());
        rh * (ddc - dc / rh - w * w * c / (rh * rh)) * zeta(2, t)
    });
    let pot = solve_div_potential(&f3, &g, &SineBasis::new(T0, 16)).unwrap();
    let exact = g.sample(|r, t| (k * r).cos() * zeta(2, t));
    norms::l2(&(&pot.phi - &exact), &g)
}

#[test]
fn manufactured_potential_converges_at_second_order() {
    let e = [manufactured_error(65), manufactured_error(129), manufactured_error(257)];
    for w in e.windows(2) {
        let p = (w[0] / w[1]).log2();
        assert!((1.8..2.3).contains(&p), "order {p}, errors {e:?}");
    }
}

#[test]
fn shift_examples() {
    let g = grid(33, 33);
    let u = g.sample(|r, t| r + t);
    let v = g.sample(|r, t| r * t);
    let (uc, vc) = shift_velocity(&u, &v, &DivPotential::zeros(&g, 8), &g);
    assert_eq!(uc, u);
    assert_eq!(vc, v);
    let s = |r: f64| r * r + 1.0;
    let mut pot = DivPotential::zeros(&g, 8);
    let w = 2.0 * PI / (2.0 * T0);
    pot.phi = g.sample(|r, t| s(r) * zeta(2, t));
    pot.phi_theta = g.sample(|r, t| s(r) * w * (w * (t + T0)).cos());
    pot.phi_r = g.sample(|r, t| 2.0 * r * zeta(2, t));
    let (uc, vc) = shift_velocity(&g.zeros(), &g.zeros(), &pot, &g);
    for i in 0..g.nr {
        for j in 0..g.ntheta {
            assert!((uc[[i, j]] - pot.phi_theta[[i, j]] / g.rhat[i]).abs() < 1e-15);
            assert_eq!(vc[[i, j]], -pot.phi_r[[i, j]]);
        }
    }
}

/// `(𝒰, 𝒱)` with `𝒰 = 0` and analytic curl `f3 = ∂_r(r̂𝒱)`.
fn vortical_field(g: &Grid) -> (Array2<f64>, Array2<f64>, Array2<f64>) {
    let prof = |r: f64| r * (0.25 - r) * (1.0 + r);
    let dprof = |r: f64| (0.25 - 2.0 * r) * (1.0 + r) + r * (0.25 - r);
    let v = g.sample(|r, t| prof(r) / (1.0 - r) * zeta(1, t));
    let f3 = g.sample(|r, t| dprof(r) * zeta(1, t));
    (g.zeros(), v, f3)
}

fn interior_l2(f: &Array2<f64>, g: &Grid) -> f64 {
    let mut s = 0.0;
    for i in 2..g.nr - 2 {
        for j in 2..g.ntheta - 2 {
            s += f[[i, j]] * f[[i, j]];
        }
    }
    (s * g.dr * g.dtheta).sqrt()
}

#[test]
fn shifted_velocity_is_curl_free_up_to_solve_residual() {
    let g = grid(129, 129);
    let (u, v, f3) = vortical_field(&g);
    let pot = solve_div_potential(&f3, &g, &SineBasis::new(T0, 64)).unwrap();
    let (uc, vc) = shift_velocity(&u, &v, &pot, &g);
    let curl = discrete_curl(&uc, &vc, &g);
    // φ-equation residual in flux form with the stencils of the discrete curl
    let flux_r = Array2::from_shape_fn(f3.dim(), |(i, j)| g.rhat[i] * pot.phi_r[[i, j]]);
    let flux_t = Array2::from_shape_fn(f3.dim(), |(i, j)| pot.phi_theta[[i, j]] / g.rhat[i]);
    let phi_res = fd::dr_fourth(&flux_r, g.dr) + fd::dtheta_fourth(&flux_t, g.dtheta) - &f3;
    let (c, r) = (interior_l2(&curl, &g), interior_l2(&phi_res, &g));
    assert!(c < 10.0 * r.max(1e-12), "curl {c}, phi residual {r}");
    assert!(interior_l2(&discrete_curl(&u, &v, &g), &g) > 100.0 * c);
}

#[test]
fn curl_potential_examples() {
    let g = grid(33, 33);
    let one = g.sample(|_, _| 1.0);
    let cp = curl_potential(&one, &g.zeros(), &g, 1e-8).unwrap();
    assert!(cp.psi.indexed_iter().all(|((i, _), p)| (p - g.r[i]).abs() < 1e-13));
    let c = 0.4;
    let v = g.sample(|r, _| c / (1.0 - r));
    let cp = curl_potential(&g.zeros(), &v, &g, 1e-8).unwrap();
    assert!(cp.psi.indexed_iter().all(|((_, j), p)| (p - c * (g.theta[j] + T0)).abs() < 1e-13));
    let tilted = g.sample(|_, t| t);
    assert!(matches!(curl_potential(&tilted, &g.zeros(), &g, 1e-8), Err(Error::NotIntegrable { .. })));
}

#[test]
fn gauge_consistency() {
    let g = grid(257, 129);
    let p = |r: f64, t: f64| (2.0 * r).sin() * (t + 0.3).cos() + r * r * t;
    let uc = g.sample(|r, t| 2.0 * (2.0 * r).cos() * (t + 0.3).cos() + 2.0 * r * t);
    let vc = g.sample(|r, t| (-(2.0 * r).sin() * (t + 0.3).sin() + r * r) / (1.0 - r));
    let cp = curl_potential(&uc, &vc, &g, 1e-6).unwrap();
    assert!(cp.path_gap < 1e-8);
    let pr = fd::dr_fourth(&cp.psi, g.dr);
    let pt = fd::dtheta_fourth(&cp.psi, g.dtheta);
    for i in 0..g.nr {
        for j in 0..g.ntheta {
            assert!((pr[[i, j]] - uc[[i, j]]).abs() < 1e-7);
            assert!((pt[[i, j]] - g.rhat[i] * vc[[i, j]]).abs() < 1e-7);
            assert!((cp.psi[[i, j]] - (p(g.r[i], g.theta[j]) - p(0.0, -T0))).abs() < 1e-8);
        }
    }
}

#[test]
fn potential_vanishes_on_walls_with_even_derivatives() {
    let g = grid(33, 65);
    let f3 = g.sample(|r, t| (1.0 + r) * (t * t - T0 * T0) + r * t);
    let sine = SineBasis::new(T0, 32);
    let pot = solve_div_potential(&f3, &g, &sine).unwrap();
    let last = g.ntheta - 1;
    let w4 = Array1::from_shape_fn(32, |k| sine.wavenumber(k + 1).powi(4));
    let d4 = (&pot.modes * &w4).dot(&sine.table(&g.theta));
    for i in 0..g.nr {
        for j in [0, last] {
            assert!(pot.phi[[i, j]].abs() < 1e-12);
            assert!(pot.phi_tt[[i, j]].abs() < 1e-12);
            assert!(d4[[i, j]].abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn div_potential_is_linear(a in prop::collection::vec(-1.0f64..1.0, 6), alpha in -2.0f64..2.0, beta in -2.0f64..2.0) {
        let g = grid(17, 33);
        let sine = SineBasis::new(T0, 16);
        let f = g.sample(|r, t| a[0] + a[1] * r + a[2] * t + a[3] * r * t);
        let h = g.sample(|r, t| a[4] * (3.0 * t).sin() + a[5] * r * r);
        let pf = solve_div_potential(&f, &g, &sine).unwrap();
        let ph = solve_div_potential(&h, &g, &sine).unwrap();
        let pc = solve_div_potential(&(&f * alpha + &h * beta), &g, &sine).unwrap();
        let e = &pc.phi - &(&pf.phi * alpha + &ph.phi * beta);
        prop_assert!(e.iter().all(|v| v.abs() < 1e-10));
    }

    #[test]
    fn potential_round_trip(c in prop::collection::vec(-1.0f64..1.0, 4)) {
        let g = grid(129, 257);
        let p = |r: f64, t: f64| c[0] * r * t + c[1] * (r + t).sin() + c[2] * (2.0 * t).cos() * r + c[3] * r.exp();
        let uc = g.sample(|r, t| c[0] * t + c[1] * (r + t).cos() + c[2] * (2.0 * t).cos() + c[3] * r.exp());
        let vc = g.sample(|r, t| (c[0] * r + c[1] * (r + t).cos() - 2.0 * c[2] * (2.0 * t).sin() * r) / (1.0 - r));
        let cp = curl_potential(&uc, &vc, &g, 1e-4).unwrap();
        for i in 0..g.nr {
            for j in 0..g.ntheta {
                prop_assert!((cp.psi[[i, j]] - (p(g.r[i], g.theta[j]) - p(0.0, -T0))).abs() < 1e-8);
            }
        }
    }
}

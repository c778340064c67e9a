use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use ndarray::{Array1, Array2};
use nozzle_ep::domain::{discrete_norm, inner_product, project, BasisKind, CosineBasis, GasConfig, Grid, InletState, NozzleGeometry, SineBasis};
use nozzle_ep::Error;
use proptest::prelude::*;

fn geo() -> NozzleGeometry {
    NozzleGeometry::new(0.5, 1.0, FRAC_PI_4, 0.25).unwrap()
}

fn grid(nr: usize, nt: usize) -> Grid {
    Grid::new(&geo(), nr, nt).unwrap()
}

fn sample(b: &CosineBasis, k: usize, g: &Grid) -> Array1<f64> {
    g.theta.mapv(|t| b.eta(k, t))
}

#[test]
fn inner_product_of_basis_elements() {
    let g = grid(5, 257);
    let b = CosineBasis::new(FRAC_PI_4, 8);
    let e1 = sample(&b, 1, &g);
    let e2 = sample(&b, 2, &g);
    assert!((inner_product(e1.view(), e1.view(), g.dtheta).unwrap() - 1.0).abs() < 1e-10);
    assert!(inner_product(e1.view(), e2.view(), g.dtheta).unwrap().abs() < 1e-10);
    let one = Array1::ones(257);
    assert!((inner_product(one.view(), one.view(), g.dtheta).unwrap() - FRAC_PI_2).abs() < 1e-12);
}

#[test]
fn inner_product_rejects_mismatched_lengths() {
    let a = Array1::ones(5);
    let b = Array1::ones(6);
    assert!(matches!(inner_product(a.view(), b.view(), 0.1), Err(Error::SizeMismatch { .. })));
}

#[test]
fn orthonormality_on_eight_m_plus_one_nodes() {
    for kind in [BasisKind::Even, BasisKind::Full] {
        let m = 16;
        let g = grid(3, 8 * m + 1);
        let b = CosineBasis::with_kind(FRAC_PI_4, m, kind);
        for j in 0..=m {
            for k in 0..=m {
                let ip = inner_product(sample(&b, j, &g).view(), sample(&b, k, &g).view(), g.dtheta).unwrap();
                let want = if j == k { 1.0 } else { 0.0 };
                assert!((ip - want).abs() < 1e-10, "{kind:?} <eta_{j}, eta_{k}> = {ip}");
            }
        }
    }
}

#[test]
fn basis_derivative_vanishes_at_walls() {
    for kind in [BasisKind::Even, BasisKind::Full] {
        let b = CosineBasis::with_kind(FRAC_PI_4, 12, kind);
        for k in 0..=12 {
            assert!(b.deta(k, FRAC_PI_4).abs() < 1e-12);
            assert!(b.deta(k, -FRAC_PI_4).abs() < 1e-12);
        }
    }
}

#[test]
fn eigenvalues_match_second_derivative() {
    let b = CosineBasis::new(FRAC_PI_4, 6);
    let h = 1e-4;
    for k in 0..=6 {
        let t = 0.3;
        let d2 = (b.eta(k, t + h) - 2.0 * b.eta(k, t) + b.eta(k, t - h)) / (h * h);
        assert!((d2 + b.eigenvalue(k) * b.eta(k, t)).abs() < 1e-4 * (1.0 + b.eigenvalue(k)));
    }
    assert!((b.eigenvalue(3) - (3.0 * PI / FRAC_PI_4).powi(2)).abs() < 1e-9);
}

#[test]
fn discrete_norm_examples() {
    let g = grid(65, 65);
    assert_eq!(discrete_norm(&g.zeros(), &g, 2).unwrap(), 0.0);
    let one = g.sample(|_, _| 1.0);
    let want = (0.25 * FRAC_PI_2).sqrt();
    assert!((discrete_norm(&one, &g, 0).unwrap() - want).abs() < 1e-10);
    assert!((want - 0.6267).abs() < 1e-4);
    // field r: ∫(r² + 1) over the sector; trapezoid in r is O(dr²)
    let g = grid(1025, 33);
    let r = g.sample(|r, _| r);
    let want = (0.25f64.powi(3) / 3.0 * FRAC_PI_2 + 0.25 * FRAC_PI_2).sqrt();
    assert!((discrete_norm(&r, &g, 1).unwrap() - want).abs() < 1e-6);
    assert!((want - 0.633151).abs() < 1e-6);
}

#[test]
fn discrete_norm_rejects_order_three() {
    let g = grid(5, 5);
    assert!(matches!(discrete_norm(&g.zeros(), &g, 3), Err(Error::UnsupportedOrder(3))));
}

#[test]
fn projection_of_basis_elements() {
    let g = grid(3, 129);
    let b = CosineBasis::new(FRAC_PI_4, 8);
    let c = project(sample(&b, 2, &g).view(), &b, &g).unwrap();
    for k in 0..=8 {
        assert!((c[k] - if k == 2 { 1.0 } else { 0.0 }).abs() < 1e-10);
    }
    let f = sample(&b, 0, &g) * 3.0 - sample(&b, 3, &g) * 0.5;
    let c = project(f.view(), &b, &g).unwrap();
    let want = [3.0, 0.0, 0.0, -0.5, 0.0, 0.0, 0.0, 0.0, 0.0];
    for k in 0..=8 {
        assert!((c[k] - want[k]).abs() < 1e-10);
    }
}

#[test]
fn projection_of_theta_squared_matches_cosine_series() {
    // ∫ θ² cos(kπθ/θ0) dθ = 4θ0³(-1)^k/(kπ)², ∫ θ² dθ = 2θ0³/3
    let t0 = FRAC_PI_4;
    let g = grid(3, 4097);
    let b = CosineBasis::new(t0, 8);
    let c = project(g.theta.mapv(|t| t * t).view(), &b, &g).unwrap();
    let oracle = |k: usize| {
        if k == 0 {
            (0.5 / t0).sqrt() * 2.0 * t0.powi(3) / 3.0
        } else {
            let kp = k as f64 * PI;
            t0.powf(-0.5) * 4.0 * t0.powi(3) * (-1f64).powi(k as i32) / (kp * kp)
        }
    };
    for k in 0..=8 {
        assert!((c[k] - oracle(k)).abs() < 1e-6, "k = {k}: {} vs {}", c[k], oracle(k));
    }
}

#[test]
fn projection_rejects_aliasing() {
    let g = grid(3, 16);
    let b = CosineBasis::new(FRAC_PI_4, 8);
    assert!(matches!(project(Array1::zeros(16).view(), &b, &g), Err(Error::Aliasing { .. })));
    assert!(b.check_aliasing(17).is_ok());
    let s = SineBasis::new(FRAC_PI_4, 15);
    assert!(s.check_aliasing(16).is_err());
    assert!(s.check_aliasing(17).is_ok());
}

#[test]
fn sine_basis_vanishes_on_walls() {
    let g = grid(3, 33);
    let s = SineBasis::new(FRAC_PI_4, 8);
    let t = s.table(&g.theta);
    for k in 0..8 {
        assert_eq!(t[[k, 0]], 0.0);
        assert_eq!(t[[k, 32]], 0.0);
        assert!(s.zeta(k + 1, FRAC_PI_4).abs() < 1e-14);
    }
}

#[test]
fn grid_nodes() {
    let g = grid(5, 9);
    assert_eq!(g.r[0], 0.0);
    assert_eq!(g.r[4], 0.25);
    assert_eq!(g.theta[0], -FRAC_PI_4);
    assert_eq!(g.theta[8], FRAC_PI_4);
    for j in 0..9 {
        assert_eq!(g.theta[j], -g.theta[8 - j]);
    }
    assert!(g.theta.windows(2).into_iter().all(|w| w[1] > w[0]));
    assert!((g.rhat[4] - 0.75).abs() < 1e-15);
    assert!(Grid::new(&geo(), 2, 9).is_err());
    assert!(Grid::new(&geo(), 5, 2).is_err());
}

#[test]
fn parameter_validation() {
    assert!(GasConfig::new(1.0, 1.0).is_err());
    assert!(GasConfig::new(2.0, 1.0).is_err());
    assert!(GasConfig::new(1.4, 0.0).is_err());
    assert!(NozzleGeometry::new(1.0, 0.5, 0.5, 0.1).is_err());
    assert!(NozzleGeometry::new(0.5, 1.0, 2.0, 0.1).is_err());
    assert!(NozzleGeometry::new(0.5, 1.0, 0.5, 0.5).is_err());
    let gas = GasConfig::new(1.4, 1.0).unwrap();
    assert!(InletState::new(-1.0, 2.0, 1.0, -10.0, &gas, &geo()).is_err());
    let inlet = InletState::new(1.0, 2.0, 1.0 / 1.4, -10.0, &gas, &geo()).unwrap();
    assert!((inlet.j0 - 2.0).abs() < 1e-15);
    assert!((inlet.m0sq - 4.0).abs() < 1e-12);
    assert!((inlet.s0 - (1.0f64 / 1.4).ln()).abs() < 1e-15);
    assert!(gas.clone().with_b_field(Array2::from_elem((2, 2), -1.0)).is_err());
}

fn field_strategy() -> impl Strategy<Value = Array2<f64>> {
    prop::collection::vec(-10.0f64..10.0, 9 * 11).prop_map(|v| Array2::from_shape_vec((9, 11), v).unwrap())
}

proptest! {
    #[test]
    fn norm_is_monotone_in_order(f in field_strategy()) {
        let g = grid(9, 11);
        let n0 = discrete_norm(&f, &g, 0).unwrap();
        let n1 = discrete_norm(&f, &g, 1).unwrap();
        let n2 = discrete_norm(&f, &g, 2).unwrap();
        prop_assert!(n0 <= n1 && n1 <= n2);
    }

    #[test]
    fn projection_is_idempotent(v in prop::collection::vec(-5.0f64..5.0, 41), full in any::<bool>()) {
        let g = grid(3, 41);
        let kind = if full { BasisKind::Full } else { BasisKind::Even };
        let b = CosineBasis::with_kind(FRAC_PI_4, 5, kind);
        let c = project(Array1::from(v).view(), &b, &g).unwrap();
        let again = project(b.synthesize(c.view(), &g).view(), &b, &g).unwrap();
        for k in 0..c.len() {
            prop_assert!((c[k] - again[k]).abs() < 1e-12);
        }
    }
}

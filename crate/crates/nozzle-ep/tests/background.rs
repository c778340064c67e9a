mod common;

use std::time::Instant;

use nozzle_ep::background::{critical_entrance_field, integrate_background, mu0, observed_order, positivity_weight, rhs, validate_inlet};
use nozzle_ep::domain::{GasConfig, InletState};
use nozzle_ep::Error;
use proptest::prelude::*;

use common::fixture;

#[test]
fn rhs_hand_evaluation() {
    let (gas, geo, inlet) = fixture();
    // r̂ = 1, M² = 4, c̄² = 1: bracket 2.4·(-10) + 3.6 = -20.4
    let (dm, dre) = rhs(0.0, 4.0, -10.0, &gas, &inlet, &geo).unwrap();
    assert!((dm - 27.2).abs() < 1e-9, "{dm}");
    // ρ̄ = μ0 (1/4)^{1/2.4} = 1 = b0
    assert!((mu0(&gas, &inlet) - 4f64.powf(1.0 / 2.4)).abs() < 1e-12);
    assert!(dre.abs() < 1e-12);
    let half = GasConfig::new(1.4, 0.5).unwrap();
    let (_, dre) = rhs(0.0, 4.0, -10.0, &half, &inlet, &geo).unwrap();
    assert!((dre + 0.5).abs() < 1e-12);
}

#[test]
fn rhs_errors() {
    let (gas, geo, inlet) = fixture();
    assert!(matches!(rhs(0.0, 1.0 + 1e-9, -10.0, &gas, &inlet, &geo), Err(Error::SonicSingularity { .. })));
    assert!(matches!(rhs(0.0, -1.0, -10.0, &gas, &inlet, &geo), Err(Error::Domain(_))));
    assert!(matches!(rhs(1.0, 4.0, -10.0, &gas, &inlet, &geo), Err(Error::Domain(_))));
}

#[test]
fn fixture_invariants() {
    let (gas, geo, inlet) = fixture();
    let t = Instant::now();
    let bg = integrate_background(&gas, &inlet, &geo, 513).unwrap();
    assert!(t.elapsed().as_secs_f64() < 1.0);
    assert!(bg.mass_flux_error() < 1e-10);
    assert!((0..bg.len()).all(|i| (bg.rhat[i] * bg.rho[i] * bg.u[i] - 2.0).abs() < 1e-10));
    assert!(bg.bernoulli_gap() < 1e-9);
    assert!(bg.msq_increasing());
    assert!(bg.msq.iter().all(|m| *m > 1.0));
    assert!(bg.density_route_gap() < 1e-10);
    assert!((bg.rho[0] - 1.0).abs() < 1e-14 && (bg.u[0] - 2.0).abs() < 1e-14);
    // c̄² = γ e^{S0} ρ̄^{γ-1}
    for i in 0..bg.len() {
        assert!((bg.csq[i] - 1.4 * inlet.s0.exp() * bg.rho[i].powf(0.4)).abs() < 1e-13);
    }
}

#[test]
fn rk4_order_from_step_halving() {
    let (gas, geo, inlet) = fixture();
    let p = observed_order(&gas, &inlet, &geo, [129, 257, 513]).unwrap();
    assert!((3.7..=4.3).contains(&p), "order {p}");
    // finer pairs sit at roundoff: the 513/1025 gap is bounded by the 257/513 gap / 2^3.7
    let end = |n| {
        let bg = integrate_background(&gas, &inlet, &geo, n).unwrap();
        bg.msq[n - 1]
    };
    let (a, b, c) = (end(257), end(513), end(1025));
    assert!((b - c).abs() <= (a - b).abs() / 2f64.powf(3.7) + 1e-12);
}

#[test]
fn stationary_first_step() {
    let (gas, geo, _) = fixture();
    // (γ+1)Ē/c̄² + (2 + (γ-1)M²)/r̂ = 0 at r = 0 gives Ē(0) = -1.5; ρ̄(0) = b0 = 1
    let inlet = InletState::new(1.0, 2.0, 1.0 / 1.4, -1.5, &gas, &geo).unwrap();
    let (dm, dre) = rhs(0.0, 4.0, -1.5, &gas, &inlet, &geo).unwrap();
    assert!(dm.abs() < 1e-14 && dre.abs() < 1e-14);
    // the vector field depends on r through r̂, so the first step moves the state by O(h²)
    let step = |nr: usize| {
        let bg = integrate_background(&gas, &inlet, &geo, nr).unwrap();
        ((bg.msq[1] - 4.0).abs(), (bg.rhat[1] * bg.e[1] + 1.5).abs())
    };
    let (m1, e1) = step(65);
    let (m2, e2) = step(129);
    let h = 0.25 / 64.0;
    assert!(m1 < 10.0 * h * h && e1 < 10.0 * h * h);
    assert!(((m1 / m2).log2() - 2.0).abs() < 0.1, "{}", (m1 / m2).log2());
    assert!(((e1 / e2).log2() - 2.0).abs() < 0.1, "{}", (e1 / e2).log2());
}

#[test]
fn inlet_validation() {
    let (gas, geo, inlet) = fixture();
    let rep = validate_inlet(&gas, &inlet, &geo);
    assert!(rep.all_pass());
    assert!((rep.log_ratio - 2f64.ln()).abs() < 1e-15);
    assert!((rep.log_ratio_bound - 3.0).abs() < 1e-12);
    let u_a = 2.0 * (1.0 / (2.0 * 0.5f64.powf(1.4))).powf(-1.0 / 0.6);
    assert!((rep.u_a - u_a).abs() < 1e-12);
    assert!((rep.u_a - 1.2599).abs() < 1e-3);
    let sub = InletState::new(1.0, 0.9f64.sqrt(), 1.0 / 1.4, -10.0, &gas, &geo).unwrap();
    let rep = validate_inlet(&gas, &sub, &geo);
    assert!((rep.m0sq - 0.9).abs() < 1e-12);
    assert!(!rep.supersonic && !rep.all_pass());
    assert!(integrate_background(&gas, &sub, &geo, 65).is_err());
}

#[test]
fn positivity_weight_examples() {
    let (gas, geo, inlet) = fixture();
    let mut bg = integrate_background(&gas, &inlet, &geo, 129).unwrap();
    let (h, mu) = positivity_weight(&bg);
    assert!(mu > 0.0);
    // ρ̄ = c̄² = r̂ = 1 at the entrance
    assert!((h[0] - 0.5).abs() < 1e-12);
    bg.csq[5] = 2.0 * bg.rhat[5].powi(2) * bg.rho[5];
    let (h, mu) = positivity_weight(&bg);
    assert!(h[5].abs() < 1e-14);
    assert!(mu <= 1e-14);
}

#[test]
fn positive_entrance_field_decelerates_to_sonic() {
    let (gas, geo, _) = fixture();
    let inlet = InletState::new(1.0, 2.0, 1.0 / 1.4, 10.0, &gas, &geo).unwrap();
    match integrate_background(&gas, &inlet, &geo, 257) {
        Err(Error::SonicCrossing { r, .. }) => assert!(r > 0.0 && r < 0.25),
        other => panic!("expected a sonic crossing, got {other:?}"),
    }
}

#[test]
fn critical_entrance_field_brackets_monotonicity() {
    let (gas, geo, inlet) = fixture();
    let ec = critical_entrance_field(&gas, &inlet, &geo, 129, 1e-6).unwrap();
    assert!(ec > 0.0 && ec < 10.0, "{ec}");
    let run = |e0: f64| {
        let mut i = inlet;
        i.e_entrance = e0;
        integrate_background(&gas, &i, &geo, 129).map(|bg| bg.msq_increasing()).unwrap_or(false)
    };
    assert!(run(-ec * 1.01));
    assert!(!run(-ec * 0.99));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn negative_fields_give_admissible_backgrounds(e0 in -40.0f64..-10.0, u0 in 1.8f64..2.5) {
        let (gas, geo, _) = fixture();
        let inlet = InletState::new(1.0, u0, 1.0 / 1.4, e0, &gas, &geo).unwrap();
        let bg = integrate_background(&gas, &inlet, &geo, 129).unwrap();
        prop_assert!(bg.msq_increasing());
        prop_assert!(bg.mass_flux_error() < 1e-10);
        prop_assert!(bg.bernoulli_gap() < 1e-7);
        prop_assert!(bg.density_route_gap() < 1e-10);
    }
}

mod common;

use common::{max_abs, problem_with, sigma0, small_sigma, solver, symmetric, S_SMALL, V_SMALL};
use ndarray::Array2;
use nozzle_ep::domain::{norms, Grid};
use nozzle_ep::error::Error;
use nozzle_ep::iteration::{
    assemble_rhs, inner_fixed_point, inner_map_t1, outer_map_t2, solve_problem, BoundaryData, Problem, Profile, Reference, Scope, SolverConfig,
};
use nozzle_ep::state::{FlowState, PerturbationState};

fn ray_state(pb: &Problem) -> PerturbationState {
    let g = &pb.grid;
    let mut x = PerturbationState::zeros(g);
    for i in 0..g.nr {
        for j in 0..g.ntheta {
            x.s[[i, j]] = pb.data.s_en[j] - pb.bg.s0;
            x.k[[i, j]] = pb.data.k_en[j];
        }
    }
    x
}

fn reflect(a: &Array2<f64>, sign: f64) -> f64 {
    let nt = a.ncols();
    let mut worst = 0.0f64;
    for i in 0..a.nrows() {
        for j in 0..nt {
            worst = worst.max((a[[i, j]] - sign * a[[i, nt - 1 - j]]).abs());
        }
    }
    worst
}

fn smooth_perturbation(grid: &Grid, s: f64) -> PerturbationState {
    let t0 = grid.theta[grid.ntheta - 1];
    let depth = grid.r[grid.nr - 1];
    let mut x = PerturbationState::zeros(grid);
    for i in 0..grid.nr {
        let r = grid.r[i];
        for j in 0..grid.ntheta {
            let t = grid.theta[j];
            let c = (std::f64::consts::PI * t / t0).cos();
            x.u[[i, j]] = s * (1.0 + r) * c;
            x.v[[i, j]] = s * r * (std::f64::consts::PI * (t + t0) / t0).sin();
            x.phi[[i, j]] = s * r * (depth - r) * c;
        }
    }
    x
}

#[test]
fn profile_parse_and_derivatives() {
    let scope = Scope::new().with("a", 2.0);
    let p = Profile::parse("a*sin(theta)", &scope).unwrap();
    assert!((p.eval(0.3) - 2.0 * 0.3f64.sin()).abs() < 1e-15);
    assert!((p.derivative(0.3, 1, 0.0) - 2.0 * 0.3f64.cos()).abs() < 1e-5);
    assert!((p.derivative(0.3, 3, 0.0) + 2.0 * 0.3f64.cos()).abs() < 1e-4);
    assert_eq!(Profile::constant(1.5).derivative(0.1, 2, 1.5), 0.0);
    assert!(Profile::parse("a*", &scope).is_err());
    assert!(Profile::parse("nope*theta", &scope).is_err());
}

#[test]
fn boundary_data_background_is_compatible_and_zero_sigma() {
    let pb = sigma0(33, 4);
    let s = pb.sigma().unwrap();
    assert_eq!(s.total(), 0.0);
    assert_eq!(pb.bd.compatibility_defect(&pb.reference, pb.geo.theta0), 0.0);
}

#[test]
fn incompatible_or_nonpositive_inlet_rejected() {
    let (gas, geo, inlet) = common::fixture();
    let bg = nozzle_ep::background::integrate_background(&gas, &inlet, &geo, 33).unwrap();
    let r = Reference::new(&inlet, &bg);
    let scope = BoundaryData::scope(&r, &geo);
    let mut bd = BoundaryData::background(&r);
    bd.v_en = Profile::parse("1e-3*cos(theta)", &scope).unwrap();
    let e = Problem::new(gas.clone(), geo, inlet, bd, solver(33, 4)).unwrap_err();
    assert!(matches!(e, Error::Incompatible(_)));
    let mut bd = BoundaryData::background(&r);
    bd.u_en = Profile::parse("-1", &scope).unwrap();
    assert!(matches!(Problem::new(gas.clone(), geo, inlet, bd, solver(33, 4)).unwrap_err(), Error::Incompatible(_)));
    let cfg = SolverConfig { relax: 0.0, ..solver(33, 4) };
    assert!(matches!(Problem::new(gas, geo, inlet, BoundaryData::background(&r), cfg).unwrap_err(), Error::InvalidParameter { .. }));
}

#[test]
fn reflected_data_flip_odd_profiles() {
    let pb = symmetric(1e-3, 33, 4);
    let rf = pb.bd.reflected();
    for t in [0.1, 0.5] {
        assert!((rf.v_en.eval(t) + pb.bd.v_en.eval(-t)).abs() < 1e-15);
        assert!((rf.s_en.eval(t) - pb.bd.s_en.eval(-t)).abs() < 1e-15);
    }
}

#[test]
fn rhs_vanishes_at_background() {
    let pb = sigma0(65, 8);
    let rhs = assemble_rhs(&pb, &PerturbationState::zeros(&pb.grid)).unwrap();
    for (name, f) in [("f1", &rhs.f1), ("f2", &rhs.f2), ("f3", &rhs.f3), ("F1", &rhs.big_f1), ("F2", &rhs.big_f2)] {
        assert!(max_abs(f) < 1e-12, "{name} = {}", max_abs(f));
    }
    assert!(rhs.g.iter().all(|v| v.abs() < 1e-12));
    assert!(max_abs(&rhs.phi_star) < 1e-12);
}

#[test]
fn rhs_background_density_shift() {
    let (gas, geo, inlet) = common::fixture();
    let cfg = solver(33, 4);
    let grid = Grid::new(&geo, cfg.nr, cfg.ntheta()).unwrap();
    let eps = 1e-3;
    let gas = gas.with_b_field(grid.zeros() + 1.0 + eps).unwrap();
    let bg = nozzle_ep::background::integrate_background(&gas, &inlet, &geo, cfg.nr).unwrap();
    let bd = BoundaryData::background(&Reference::new(&inlet, &bg));
    let pb = Problem::new(gas, geo, inlet, bd, cfg).unwrap();
    let rhs = assemble_rhs(&pb, &PerturbationState::zeros(&pb.grid)).unwrap();
    // Poisson reads ΔΦ = ρ - b, so the remainder carries -(b - b0).
    assert!(rhs.f2.iter().all(|v| (v + eps).abs() < 1e-14));
    assert!(max_abs(&rhs.f1) < 1e-14);
    assert!(max_abs(&rhs.f3) < 1e-14);
    assert!(pb.sigma().unwrap().sigma1 > 0.0);
}

#[test]
fn rhs_remainder_is_quadratic() {
    let pb = sigma0(65, 8);
    let norm = |s: f64| {
        let rhs = assemble_rhs(&pb, &smooth_perturbation(&pb.grid, s)).unwrap();
        (norms::l2(&rhs.f1, &pb.grid), norms::l2(&rhs.f2, &pb.grid))
    };
    let (a1, a2) = norm(1e-2);
    let (b1, b2) = norm(1e-3);
    let o1 = (a1 / b1).log10();
    let o2 = (a2 / b2).log10();
    assert!((1.9..2.1).contains(&o1), "f1 scaling exponent {o1}");
    assert!((1.9..2.1).contains(&o2), "f2 scaling exponent {o2}");
}

#[test]
fn t1_background_fixed_point() {
    let pb = sigma0(65, 8);
    let step = inner_map_t1(&pb, &PerturbationState::zeros(&pb.grid)).unwrap();
    for f in [&step.state.u, &step.state.v, &step.state.phi] {
        assert!(max_abs(f) < 1e-12);
    }
}

#[test]
fn t1_linear_response() {
    let c = |eps: f64| {
        let pb = problem_with(solver(65, 8), &[("v_en", V_SMALL)], &[("eps", eps)]);
        let x = inner_map_t1(&pb, &PerturbationState::zeros(&pb.grid)).unwrap().state;
        let n = x.low_norm_distance(&PerturbationState::zeros(&pb.grid), &pb.grid).unwrap();
        assert!(n > 0.0);
        n / eps
    };
    let (c1, c2) = (c(1e-3), c(1e-4));
    assert!((c1 / c2 - 1.0).abs() < 0.05, "C = {c1} vs {c2}");
}

#[test]
fn t1_contracts() {
    let pb = small_sigma(1e-3, 65, 8);
    let x0 = ray_state(&pb);
    let x1 = inner_map_t1(&pb, &x0).unwrap().state;
    let x2 = inner_map_t1(&pb, &x1).unwrap().state;
    let x3 = inner_map_t1(&pb, &x2).unwrap().state;
    let d1 = x1.low_norm_distance(&x0, &pb.grid).unwrap();
    let d2 = x2.low_norm_distance(&x1, &pb.grid).unwrap();
    let d3 = x3.low_norm_distance(&x2, &pb.grid).unwrap();
    assert!(d2 / d1 < 0.9 && d3 / d2 < 0.9, "ratios {} {}", d2 / d1, d3 / d2);
}

#[test]
fn inner_trivial_and_geometric() {
    let pb = sigma0(33, 4);
    let r = inner_fixed_point(&pb, &PerturbationState::zeros(&pb.grid)).unwrap();
    assert_eq!(r.iterations, 1);
    assert!(r.history[0] < 1e-12);

    let pb = small_sigma(1e-3, 65, 8);
    let r = inner_fixed_point(&pb, &ray_state(&pb)).unwrap();
    assert!(r.iterations >= 3);
    assert!(r.max_ratio() < 0.9, "ratios {:?}", r.history);
    assert!(*r.history.last().unwrap() <= pb.cfg.tol_inner);
}

#[test]
fn inner_budget_exhaustion() {
    let cfg = SolverConfig { tol_inner: 1e-30, max_inner: 5, ..solver(65, 8) };
    let pb = problem_with(cfg, &[("v_en", V_SMALL), ("s_en", S_SMALL)], &[("eps", 1e-2)]);
    match inner_fixed_point(&pb, &ray_state(&pb)) {
        Err(Error::NonConvergence { stage, iterations, history, .. }) => {
            assert_eq!(stage, "inner");
            assert_eq!(iterations, 5);
            assert_eq!(history.len(), 5);
            // decreasing until roundoff takes over
            let first = &history[..3];
            assert!(first.windows(2).all(|w| w[1] < w[0]), "{history:?}");
        }
        other => panic!("expected non-convergence, got {other:?}"),
    }
}

#[test]
fn t2_trivial_and_rays() {
    let pb = sigma0(33, 4);
    let out = outer_map_t2(&pb, &PerturbationState::zeros(&pb.grid)).unwrap();
    assert!(max_abs(&out.state.s) < 1e-14 && max_abs(&out.state.k) < 1e-14);

    // background velocity: streamlines are rays up to the O(ε) density variation, so the
    // entrance data are copied radially up to O(ε²)
    let eps = 1e-3;
    let pb = problem_with(solver(65, 8), &[("s_en", S_SMALL), ("k_en", "eps*(1+cos(pi*theta/theta0))")], &[("eps", eps)]);
    let x = ray_state(&pb);
    let out = outer_map_t2(&pb, &x).unwrap();
    let (ds, dk) = (max_abs(&(&out.state.s - &x.s)), max_abs(&(&out.state.k - &x.k)));
    assert!(ds < 10.0 * eps * eps && dk < 10.0 * eps * eps, "S {ds}, K {dk}");
}

#[test]
fn t2_linear_in_inlet_data() {
    let run = |eps: f64| {
        let pb = small_sigma(eps, 65, 8);
        let inner = inner_fixed_point(&pb, &ray_state(&pb)).unwrap();
        let out = outer_map_t2(&pb, &inner.state).unwrap();
        norms::discrete_norm(&out.state.s, &pb.grid, 1).unwrap() / eps
    };
    let (a, b) = (run(1e-3), run(1e-4));
    assert!((a / b - 1.0).abs() < 0.02, "{a} vs {b}");
}

#[test]
fn solve_background_is_exact() {
    let pb = sigma0(33, 4);
    let (flow, diag) = solve_problem(&pb).unwrap();
    let bgf = FlowState::from_background(&pb.bg, &pb.grid);
    for (a, b) in [(&flow.u, &bgf.u), (&flow.v, &bgf.v), (&flow.phi, &bgf.phi), (&flow.s, &bgf.s), (&flow.k, &bgf.k)] {
        assert!(max_abs(&(a - b)) < 1e-10);
    }
    assert_eq!(diag.outer_iterations(), 1);
    assert!(diag.outer_history[0] < 1e-12);
    assert_eq!(diag.deviation_ratio, None);
    assert!(diag.kappa > 0.0);
}

#[test]
fn solve_deviation_scales_with_sigma() {
    let ratio = |eps: f64| {
        let pb = small_sigma(eps, 65, 8);
        let (_, d) = solve_problem(&pb).unwrap();
        assert!(d.kappa > 0.0);
        assert!(!d.set_radius_exceeded);
        d.deviation_ratio.unwrap()
    };
    let (a, b, c) = (ratio(1e-2), ratio(1e-3), ratio(1e-4));
    assert!(a.is_finite() && b.is_finite());
    assert!((a / b - 1.0).abs() < 0.2 && (b / c - 1.0).abs() < 0.2, "{a} {b} {c}");
}

#[test]
fn solve_commutes_with_reflection() {
    let pb = symmetric(1e-3, 65, 8);
    let (flow, _) = solve_problem(&pb).unwrap();
    for (name, f, sign) in [("U", &flow.u, 1.0), ("V", &flow.v, -1.0), ("Phi", &flow.phi, 1.0), ("S", &flow.s, 1.0), ("K", &flow.k, 1.0)] {
        let d = reflect(f, sign);
        assert!(d < 1e-9, "{name} parity defect {d}");
    }
}

#[test]
fn solve_is_a_fixed_point() {
    let pb = small_sigma(1e-3, 65, 8);
    let (flow, _) = solve_problem(&pb).unwrap();
    let x = flow.to_perturbation(&pb.bg, &pb.grid);
    let inner = inner_map_t1(&pb, &x).unwrap().state;
    assert!(inner.low_norm_distance(&x, &pb.grid).unwrap() < 10.0 * pb.cfg.tol_inner);
    let outer = outer_map_t2(&pb, &x).unwrap().state;
    assert!(outer.scalar_distance(&x, &pb.grid).unwrap() < pb.cfg.tol_outer);
}

#[test]
fn solve_wall_compatibility() {
    let pb = symmetric(1e-3, 65, 8);
    let (flow, diag) = solve_problem(&pb).unwrap();
    let (g, nt) = (&pb.grid, pb.grid.ntheta);
    let h = g.dtheta;
    // one-sided second-order differences at both walls
    let slope = |f: &Array2<f64>, i: usize, j0: usize, j1: usize, j2: usize| (-3.0 * f[[i, j0]] + 4.0 * f[[i, j1]] - f[[i, j2]]) / (2.0 * h);
    let mut worst = 0.0f64;
    for i in 0..g.nr {
        for f in [&flow.u, &flow.phi, &flow.s, &flow.k] {
            worst = worst.max(slope(f, i, 0, 1, 2).abs()).max(slope(f, i, nt - 1, nt - 2, nt - 3).abs());
        }
        worst = worst.max(flow.v[[i, 0]].abs()).max(flow.v[[i, nt - 1]].abs());
    }
    assert!(diag.wall_defect < 1e-10, "V on walls {}", diag.wall_defect);
    assert!(worst < 1e-4, "wall derivative {worst}");
}

#[test]
fn entropy_only_deviation_controlled_by_sigma3() {
    let run = |eps: f64| {
        let pb = problem_with(solver(65, 8), &[("s_en", S_SMALL)], &[("eps", eps)]);
        let s = pb.sigma().unwrap();
        assert_eq!(s.sigma1 + s.sigma2, 0.0);
        let (_, d) = solve_problem(&pb).unwrap();
        d.total_deviation() / s.sigma3
    };
    let (a, b) = (run(1e-3), run(1e-4));
    assert!((a / b - 1.0).abs() < 0.2, "{a} vs {b}");
}

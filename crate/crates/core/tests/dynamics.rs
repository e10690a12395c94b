//! Ground-state and propagation properties checked against closed forms and
//! exact symmetries.

use std::sync::Arc;

use icnls_core::functional::{self, h1_distance_sq, mass_sq};
use icnls_core::*;

fn grid(dim: usize, r_max: f64, cells: usize) -> Arc<RadialGrid> {
    Arc::new(RadialGrid::new(dim, r_max, cells).unwrap())
}

fn relative_l2(a: &ComplexField, b: &ComplexField) -> f64 {
    (mass_sq(&a.sub(b).unwrap()) / mass_sq(b)).sqrt()
}

#[test]
fn quintic_standing_wave_keeps_phase() {
    let p = ModelParams::critical(1, 0.0).unwrap();
    let g = grid(1, 15.0, 4096);
    let gs = solve_ground_state(&p, &g).unwrap();
    let controls = EvolveControls {
        t_max: 1.0,
        dt0: 1e-3,
        ..Default::default()
    };
    let traj = propagate(&gs.profile.to_complex(), &p, &controls).unwrap();
    assert_eq!(traj.verdict, Verdict::GlobalToTmax);
    let phase = Complex64::from_polar(1.0, 1.0);
    let expected = ComplexField::new(
        g.clone(),
        gs.profile.values().iter().map(|u| phase * u).collect(),
    )
    .unwrap();
    let err = relative_l2(&traj.final_state, &expected);
    assert!(err <= 1e-4, "{err}");
}

#[test]
fn subcritical_run_respects_gradient_bound() {
    let p = ModelParams::critical(1, 0.5).unwrap();
    let g = grid(1, 20.0, 4096);
    let (report, psi) = minimization_report(&p, &g).unwrap();
    let phi0 = psi.profile.scaled(0.9).to_complex();
    let bound = match gradient_bound(&phi0, &p, &report).unwrap() {
        GradientBound::Bounded(v) => v,
        GradientBound::Unbounded => panic!("expected a finite bound"),
    };
    assert!(bound > 0.0);
    let controls = EvolveControls {
        t_max: 1.0,
        ..Default::default()
    };
    let traj = propagate(&phi0, &p, &controls).unwrap();
    assert_eq!(traj.verdict, Verdict::GlobalToTmax);
    assert!(traj.relative_drift(|s| s.mass_sq) <= 1e-8);
    for s in &traj.samples {
        assert!(s.grad_norm * s.grad_norm <= 1.001 * bound);
    }
    let rates = rate_check(&traj, 1.25).unwrap();
    assert!(rates.not_blowup);
}

#[test]
fn gradient_bound_edge_cases() {
    let p = ModelParams::critical(1, 0.0).unwrap();
    let g = grid(1, 15.0, 4096);
    let (report, psi) = minimization_report(&p, &g).unwrap();
    let zero = ComplexField::zeros(g.clone());
    assert_eq!(
        gradient_bound(&zero, &p, &report).unwrap(),
        GradientBound::Bounded(0.0)
    );
    let at_threshold = psi.profile.to_complex();
    assert_eq!(
        gradient_bound(&at_threshold, &p, &report).unwrap(),
        GradientBound::Unbounded
    );
    let above = psi.profile.scaled(1.1).to_complex();
    assert_eq!(
        gradient_bound(&above, &p, &report).unwrap(),
        GradientBound::Unbounded
    );
}

#[test]
fn evolution_commutes_with_l2_scaling() {
    let p = ModelParams::critical(2, 1.0).unwrap();
    let lambda = 1.5;
    let cells = 1024;
    let g = grid(2, 16.0, cells);
    let g_scaled = grid(2, 16.0 / lambda, cells);
    let gauss = |r: f64| Complex64::new(1.2 * (-r * r).exp(), 0.0);
    let phi0 = ComplexField::from_fn(g.clone(), gauss).unwrap();
    let amp = lambda.powf(1.0);
    let phi0_scaled = ComplexField::from_fn(g_scaled.clone(), |r| gauss(lambda * r) * amp).unwrap();

    let t = 0.1;
    let base = EvolveControls {
        t_max: lambda * lambda * t,
        dt0: 1e-3 * lambda * lambda,
        ..Default::default()
    };
    let scaled = EvolveControls {
        t_max: t,
        dt0: 1e-3,
        ..Default::default()
    };
    let a = propagate(&phi0, &p, &base).unwrap();
    let b = propagate(&phi0_scaled, &p, &scaled).unwrap();
    let mapped: Vec<Complex64> = a.final_state.values().iter().map(|z| z * amp).collect();
    let mapped = ComplexField::new(g_scaled.clone(), mapped).unwrap();
    let err = relative_l2(&b.final_state, &mapped);
    assert!(err <= 1e-3, "{err}");
}

#[test]
fn critical_mass_converges_at_second_order() {
    let p = ModelParams::critical(1, 0.5).unwrap();
    let mass = |cells: usize| {
        let (report, _) = minimization_report(&p, &grid(1, 20.0, cells)).unwrap();
        report.critical_mass
    };
    let (m1, m2, m3) = (mass(1024), mass(2048), mass(4096));
    let ratio = (m1 - m2).abs() / (m2 - m3).abs();
    assert!(ratio >= 3.5, "{ratio}");
}

#[test]
fn resolved_branch_matches_rescaling() {
    let p = ModelParams::critical(1, 0.5).unwrap();
    let g = grid(1, 20.0, 16384);
    let u1 = solve_ground_state(&p, &g).unwrap();
    let u4 = solve_ground_state(&p.with_omega(4.0).unwrap(), &g).unwrap();
    let rescaled = branch(&u1, 4.0).unwrap();
    let d = h1_distance_sq(&u4.profile, &rescaled.profile).unwrap();
    let norm = mass_sq(&u4.profile) + functional::grad_norm_sq(&u4.profile);
    assert!((d / norm).sqrt() <= 1e-3);
    assert!((u4.diagnostics.mass_sq / u1.diagnostics.mass_sq - 1.0).abs() <= 1e-3);
}

#[test]
fn pohozaev_defects_separate_solutions_from_non_solutions() {
    let p = ModelParams::critical(2, 1.0).unwrap();
    let g = grid(2, 20.0, 16384);
    let gs = solve_ground_state(&p, &g).unwrap();
    let (e, r) = pohozaev_check(&gs, &p).unwrap();
    assert!(e <= 1e-5 && r <= 1e-5, "{e} {r}");
    let gauss = RealField::from_fn(g.clone(), |r| (-0.25 * r * r).exp()).unwrap();
    let (_, r_gauss) = pohozaev_defects(&gauss, &p).unwrap();
    assert!(r_gauss > 0.1);
    let moved = branch(&gs, 2.0).unwrap();
    let (e2, r2) = pohozaev_check(&moved, &p).unwrap();
    assert!((e2 - e).abs() <= 1e-5 && (r2 - r).abs() <= 1e-5);
}

#[test]
fn ground_states_are_positive_and_decreasing() {
    for (dim, b) in [(1, 0.5), (2, 1.0), (3, 1.0), (3, 0.5)] {
        let p = ModelParams::critical(dim, b).unwrap();
        let gs = solve_ground_state(&p, &grid(dim, 20.0, 4096)).unwrap();
        let v = gs.profile.values();
        assert!(v.iter().all(|&x| x > 0.0), "N={dim} b={b}");
        assert!(
            v.windows(2).all(|w| w[1] <= w[0] + 1e-10 * v[0]),
            "N={dim} b={b}"
        );
        assert!(gs.diagnostics.residual <= 1e-6);
        let tenfold = shoot(&p, 10.0 * gs.alpha, 20.0);
        assert_eq!(tenfold.class, ShotClass::CrossesZero);
    }
}

#[test]
fn self_similar_initial_data_energy() {
    let p = ModelParams::critical(1, 0.5).unwrap();
    let g = grid(1, 15.0, 4096);
    let gs = solve_ground_state(&p, &g).unwrap();
    let a = 0.7;
    let phi0 = self_similar(&gs.profile, &p, a, 0.0, &g).unwrap();
    let expected =
        functional::energy(&gs.profile, &p) + 0.25 * a * a * functional::second_moment(&gs.profile);
    let e = functional::energy(&phi0, &p);
    assert!((e - expected).abs() <= 2e-3 * expected, "{e} vs {expected}");
}

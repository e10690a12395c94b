use std::sync::Arc;

use icnls::format::{
    read_field, read_trajectory_csv, write_csv, write_json, FieldJson, PseudoReportJson,
};
use icnls_core::{
    propagate, solve_ground_state, Complex64, ComplexField, EvolveControls, ModelParams, RadialGrid,
};

fn grid(dim: usize, r_max: f64, cells: usize) -> Arc<RadialGrid> {
    Arc::new(RadialGrid::new(dim, r_max, cells).unwrap())
}

#[test]
fn complex_field_round_trips_bit_identically() {
    let params = ModelParams::critical(2, 1.0).unwrap();
    let g = grid(2, 7.3, 257);
    let field = ComplexField::from_fn(g, |r| {
        Complex64::new((-r * r / 3.0).exp() / 7.0, (r / 3.0).sin() * 1e-17)
    })
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("field.json");
    write_json(&path, &FieldJson::complex(&field, &params)).unwrap();
    let loaded = read_field(&path).unwrap();
    assert!(!loaded.is_real);
    assert_eq!(loaded.params, params);
    assert_eq!(loaded.field.grid().r_max().to_bits(), 7.3f64.to_bits());
    for (a, b) in field.values().iter().zip(loaded.field.values()) {
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }
}

#[test]
fn ground_state_round_trips_with_diagnostics() {
    let params = ModelParams::critical(1, 0.5).unwrap();
    let gs = solve_ground_state(&params, &grid(1, 15.0, 1024)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gs.json");
    write_json(&path, &FieldJson::ground_state(&gs)).unwrap();
    let loaded = read_field(&path).unwrap();
    assert!(loaded.is_real);
    let diag = loaded.diagnostics.unwrap();
    assert_eq!(diag.alpha.to_bits(), gs.alpha.to_bits());
    assert_eq!(diag.mass_sq.to_bits(), gs.diagnostics.mass_sq.to_bits());
    for (u, z) in gs.profile.values().iter().zip(loaded.field.values()) {
        assert_eq!(u.to_bits(), z.re.to_bits());
        assert_eq!(z.im, 0.0);
    }
}

#[test]
fn mismatched_components_are_rejected() {
    let params = ModelParams::critical(1, 0.5).unwrap();
    let field = ComplexField::zeros(grid(1, 5.0, 16));
    let mut json = FieldJson::complex(&field, &params);
    json.im.as_mut().unwrap().pop();
    assert!(json.load().is_err());
}

#[test]
fn trajectory_csv_round_trips() {
    let params = ModelParams::critical(1, 0.5).unwrap();
    let gs = solve_ground_state(&params, &grid(1, 15.0, 512)).unwrap();
    let controls = EvolveControls {
        t_max: 0.05,
        ..Default::default()
    };
    let traj = propagate(&gs.profile.scaled(0.5).to_complex(), &params, &controls).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trajectory.csv");
    write_csv(&path, &traj.samples).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "t,mass_sq,energy,grad_norm,sup_norm,dt"
    );
    let back = read_trajectory_csv(text.as_bytes()).unwrap();
    assert_eq!(back, traj.samples);
}

#[test]
fn infinite_lifespan_serializes_as_null() {
    let text = serde_json::to_string(&PseudoReportJson::new(-1.0, f64::INFINITY)).unwrap();
    assert!(text.contains("\"T\":null"), "{text}");
    let finite = serde_json::to_string(&PseudoReportJson::new(2.0, 0.5)).unwrap();
    assert!(finite.contains("\"T\":0.5"), "{finite}");
}

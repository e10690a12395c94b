//! One function per subcommand. Artifacts go to the output directory and a
//! short summary goes to standard output.

use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use icnls_core::{
    estimate_blowup_time, initial_distance, lifespan, minimization_report, propagate, rate_check,
    solve_ground_state, ComplexField, GroundState, ModelParams, RadialGrid, SelfSimilar,
};
use serde::Serialize;

use crate::config::{Command, InitSpec, RunConfig};
use crate::error::{CliError, CliResult};
use crate::format::{
    read_field, to_json_string, write_csv, write_json, BlowupFitJson, DistanceJson, FieldJson,
    PseudoReportJson, ReportJson, VerdictJson,
};
use crate::scan::{scan_multipliers, ScanEntry};
use crate::suite::Suite;

/// Runs the command named in `cfg`.
pub fn execute(cfg: &RunConfig) -> CliResult<()> {
    match cfg.command {
        Command::Groundstate => cmd_groundstate(cfg),
        Command::Constants => cmd_constants(cfg),
        Command::Evolve => cmd_evolve(cfg),
        Command::Selfsim => cmd_selfsim(cfg),
        Command::Distances => cmd_distances(cfg),
        Command::Rates => cmd_rates(cfg),
        Command::Verify => cmd_verify(cfg),
        Command::Scan => cmd_scan(cfg),
    }
}

fn grid_of(cfg: &RunConfig) -> CliResult<Arc<RadialGrid>> {
    Ok(Arc::new(RadialGrid::new(
        cfg.params.dim,
        cfg.grid.r_max,
        cfg.grid.cells,
    )?))
}

fn output(cfg: &RunConfig, name: &str) -> CliResult<PathBuf> {
    fs::create_dir_all(&cfg.out_dir).map_err(|e| CliError::io(&cfg.out_dir, e))?;
    Ok(cfg.out_dir.join(name))
}

/// Ground state of `(E₁)` for the configured `(N, b)` on the configured grid.
fn unit_ground_state(cfg: &RunConfig) -> CliResult<GroundState> {
    Ok(solve_ground_state(
        &cfg.params.with_omega(1.0)?,
        &grid_of(cfg)?,
    )?)
}

pub fn cmd_groundstate(cfg: &RunConfig) -> CliResult<()> {
    let gs = solve_ground_state(&cfg.params, &grid_of(cfg)?)?;
    write_json(
        &output(cfg, "groundstate.json")?,
        &FieldJson::ground_state(&gs),
    )?;
    let d = &gs.diagnostics;
    println!(
        "alpha={:.10} mass_sq={:.10} E={:.6e} J={:.10} residual={:.3e}",
        gs.alpha, d.mass_sq, d.energy, d.weinstein, d.residual
    );
    Ok(())
}

pub fn cmd_constants(cfg: &RunConfig) -> CliResult<()> {
    let (report, _) = minimization_report(&cfg.params, &grid_of(cfg)?)?;
    let json = ReportJson::from(&report);
    write_json(&output(cfg, "constants.json")?, &json)?;
    println!("{}", to_json_string(&json));
    Ok(())
}

/// Initial datum named by the init spec, with the parameters it lives under.
fn initial_datum(cfg: &RunConfig) -> CliResult<(ComplexField, ModelParams)> {
    match cfg.init.as_ref() {
        Some(InitSpec::File(path)) => {
            let loaded = read_field(path)?;
            Ok((loaded.field, loaded.params))
        }
        Some(InitSpec::Ground(c)) => {
            let gs = solve_ground_state(&cfg.params, &grid_of(cfg)?)?;
            Ok((gs.profile.scaled(*c).to_complex(), cfg.params))
        }
        Some(InitSpec::SelfSimilar(a)) => {
            let gs = unit_ground_state(cfg)?;
            let grid = gs.profile.grid_arc().clone();
            let phi0 = SelfSimilar::new(&gs.profile, &gs.params, *a)?.at(0.0, &grid)?;
            Ok((phi0, gs.params))
        }
        None => Err(CliError::Config("no initial datum given".into())),
    }
}

pub fn cmd_evolve(cfg: &RunConfig) -> CliResult<()> {
    let (phi0, params) = initial_datum(cfg)?;
    let traj = propagate(&phi0, &params, &cfg.controls)?;
    write_csv(&output(cfg, "trajectory.csv")?, &traj.samples)?;
    let verdict = VerdictJson::of(&traj);
    write_json(&output(cfg, "verdict.json")?, &verdict)?;
    write_json(
        &output(cfg, "final.json")?,
        &FieldJson::complex(&traj.final_state, &params),
    )?;
    for (k, (_, snap)) in traj.snapshots.iter().enumerate() {
        write_json(
            &output(cfg, &format!("snapshot_{k:04}.json"))?,
            &FieldJson::complex(snap, &params),
        )?;
    }
    println!("{}", to_json_string(&verdict));
    Ok(())
}

pub fn cmd_selfsim(cfg: &RunConfig) -> CliResult<()> {
    let gs = unit_ground_state(cfg)?;
    let grid = gs.profile.grid_arc().clone();
    let ss = SelfSimilar::new(&gs.profile, &gs.params, cfg.a)?;
    for (k, &t) in cfg.times.iter().enumerate() {
        let field = ss.at(t, &grid)?;
        write_json(
            &output(cfg, &format!("selfsim_{k:04}.json"))?,
            &FieldJson::complex(&field, &gs.params),
        )?;
        println!(
            "t={t} mass_sq={:.10} sup_norm={:.6e}",
            icnls_core::functional::mass_sq(&field),
            icnls_core::functional::sup_norm(&field)
        );
    }
    let report = PseudoReportJson::new(cfg.a, lifespan(cfg.a, f64::INFINITY));
    write_json(&output(cfg, "selfsim.json")?, &report)?;
    Ok(())
}

pub fn cmd_distances(cfg: &RunConfig) -> CliResult<()> {
    let gs = unit_ground_state(cfg)?;
    let rows: Vec<DistanceJson> = cfg
        .a_values
        .iter()
        .map(|&a| DistanceJson::from(&initial_distance(&gs.profile, a)))
        .collect();
    write_json(&output(cfg, "distances.json")?, &rows)?;
    println!("a,l2_part,grad_part,h1_total");
    for d in &rows {
        println!(
            "{},{:.10e},{:.10e},{:.10e}",
            d.a, d.l2_part, d.grad_part, d.h1_total
        );
    }
    Ok(())
}

pub fn cmd_rates(cfg: &RunConfig) -> CliResult<()> {
    let gs = unit_ground_state(cfg)?;
    let grid = gs.profile.grid_arc().clone();
    let ss = SelfSimilar::new(&gs.profile, &gs.params, cfg.a)?;
    let traj = propagate(&ss.at(0.0, &grid)?, &gs.params, &cfg.controls)?;
    write_csv(&output(cfg, "trajectory.csv")?, &traj.samples)?;
    let rates = rate_check(&traj, cfg.a)?;
    let mut report = PseudoReportJson::new(cfg.a, ss.blowup_time()).with_rates(&rates);
    report.blowup = estimate_blowup_time(&traj.samples)
        .ok()
        .map(|f| BlowupFitJson::from(&f));
    report.distances = vec![DistanceJson::from(&initial_distance(&gs.profile, cfg.a))];
    write_json(&output(cfg, "rates.json")?, &report)?;
    println!("{}", to_json_string(&report));
    Ok(())
}

#[derive(Serialize)]
struct ScanReport<'a> {
    #[serde(rename = "N")]
    dim: usize,
    b: f64,
    critical_mass: f64,
    runs: &'a [ScanEntry],
}

pub fn cmd_scan(cfg: &RunConfig) -> CliResult<()> {
    let gs = solve_ground_state(&cfg.params, &grid_of(cfg)?)?;
    let runs = scan_multipliers(&gs, &cfg.c_values, &cfg.controls, cfg.threads);
    let report = ScanReport {
        dim: cfg.params.dim,
        b: cfg.params.b,
        critical_mass: gs.diagnostics.mass_sq.sqrt(),
        runs: &runs,
    };
    write_json(&output(cfg, "scan.json")?, &report)?;
    for e in &runs {
        match &e.error {
            Some(msg) => println!("c={} error: {msg}", e.c),
            None => println!(
                "c={} verdict={} t_end={:.4} max_grad_norm={:.4e}",
                e.c, e.verdict, e.t_end, e.max_grad_norm
            ),
        }
    }
    Ok(())
}

/// Runs the whole verification suite; any failing criterion is an invariant
/// failure.
pub fn cmd_verify(cfg: &RunConfig) -> CliResult<()> {
    let outcomes = Suite::with_trials(cfg.seed, cfg.trials).run_all(|o| println!("{}", o.line()));
    let failed: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.passed())
        .map(|o| o.id.to_string())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Invariant(format!(
            "criteria {} failed",
            failed.join(", ")
        )))
    }
}

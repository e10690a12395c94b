//! The verification suite: every acceptance criterion at its pinned
//! tolerance, one outcome per criterion.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;
use std::time::{Duration, Instant};

use icnls_core::functional::{mass_sq, sup_norm, tail_mass_fraction, weinstein_j};
use icnls_core::{
    branch, gradient_bound, initial_distance, pohozaev_check, propagate, rate_check, report_from,
    solve_ground_state, verify_interpolation, ComplexField, EvolveControls, GradientBound,
    GroundState, ModelParams, RadialGrid, SelfSimilar, Verdict,
};

use crate::scan::scan_multipliers;

/// `(N, b)` pairs of the Pohozaev, branch, interpolation and distance checks.
pub const CASES: [(usize, f64); 3] = [(1, 0.5), (2, 1.0), (3, 1.0)];

/// Fine grid for the stationary checks.
const FINE: (f64, usize) = (20.0, 32768);

pub const SEED: u64 = 12345;
pub const TRIALS: usize = 1000;

#[derive(Debug, Clone)]
pub struct Check {
    pub label: String,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
    /// Set when the criterion could not be evaluated at all.
    pub error: Option<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.error.is_none() && !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    /// One line: status, id, title, elapsed, then the failing (or all) checks.
    pub fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!(
            "{status} criterion {} ({}) [{:.1} s]",
            self.id,
            self.title,
            self.elapsed.as_secs_f64()
        );
        if let Some(e) = &self.error {
            let _ = write!(s, ": error: {e}");
            return s;
        }
        let shown: Vec<&Check> = if self.passed() {
            self.checks.iter().collect()
        } else {
            self.checks.iter().filter(|c| !c.passed).collect()
        };
        let labels: Vec<&str> = shown.iter().map(|c| c.label.as_str()).collect();
        let _ = write!(s, ": {}", labels.join("; "));
        s
    }
}

/// Accumulates checks of one criterion.
#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn at_most(&mut self, what: impl AsRef<str>, value: f64, limit: f64) {
        self.0.push(Check {
            label: format!("{} = {value:.3e} <= {limit:.0e}", what.as_ref()),
            passed: value <= limit,
        });
    }

    fn at_least(&mut self, what: impl AsRef<str>, value: f64, limit: f64) {
        self.0.push(Check {
            label: format!("{} = {value:.6} >= {limit}", what.as_ref()),
            passed: value >= limit,
        });
    }

    fn within(&mut self, what: impl AsRef<str>, value: f64, target: f64, tol: f64) {
        self.0.push(Check {
            label: format!(
                "{} = {value:.7} (target {target} +- {tol:.0e})",
                what.as_ref()
            ),
            passed: (value - target).abs() <= tol,
        });
    }

    fn holds(&mut self, what: impl Into<String>, ok: bool) {
        self.0.push(Check {
            label: what.into(),
            passed: ok,
        });
    }

    fn runtime(&mut self, start: Instant, limit_s: f64) {
        let t = start.elapsed().as_secs_f64();
        self.0.push(Check {
            label: format!("runtime {t:.1} s < {limit_s} s"),
            passed: t < limit_s,
        });
    }
}

fn grid(dim: usize, r_max: f64, cells: usize) -> Arc<RadialGrid> {
    Arc::new(RadialGrid::new(dim, r_max, cells).expect("suite grids are valid"))
}

fn tag(dim: usize, b: f64) -> String {
    format!("N={dim},b={b}")
}

type Evaluation = Result<Checks, Box<dyn std::error::Error>>;

/// Runs criteria in order and caches the fine-grid ground states between them.
pub struct Suite {
    seed: u64,
    trials: usize,
    fine: HashMap<(usize, u64), GroundState>,
}

impl Default for Suite {
    fn default() -> Self {
        Suite::new()
    }
}

impl Suite {
    pub fn new() -> Self {
        Suite::with_trials(SEED, TRIALS)
    }

    /// Suite whose interpolation check draws `trials` fields from `seed`.
    pub fn with_trials(seed: u64, trials: usize) -> Self {
        Suite {
            seed,
            trials,
            fine: HashMap::new(),
        }
    }

    pub fn criteria() -> [(u8, &'static str); 9] {
        [
            (1, "closed-form validation"),
            (2, "Pohozaev cross-checks"),
            (3, "branch mass invariance"),
            (4, "best-constant inequality"),
            (5, "conservation and global bound"),
            (6, "standing-wave fidelity"),
            (7, "self-similar blow-up"),
            (8, "instability distances"),
            (9, "threshold contrast (exploratory)"),
        ]
    }

    pub fn run(&mut self, id: u8) -> Outcome {
        let title = Suite::criteria()
            .iter()
            .find(|(i, _)| *i == id)
            .map_or("unknown criterion", |(_, t)| t);
        let start = Instant::now();
        let result = match id {
            1 => criterion_1(),
            2 => self.criterion_2(start),
            3 => self.criterion_3(),
            4 => self.criterion_4(),
            5 => criterion_5(start),
            6 => criterion_6(),
            7 => criterion_7(start),
            8 => self.criterion_8(),
            9 => criterion_9(),
            _ => Err("no such criterion".into()),
        };
        let elapsed = start.elapsed();
        match result {
            Ok(checks) => Outcome {
                id,
                title,
                checks: checks.0,
                elapsed,
                error: None,
            },
            Err(e) => Outcome {
                id,
                title,
                checks: Vec::new(),
                elapsed,
                error: Some(e.to_string()),
            },
        }
    }

    /// Runs every criterion, calling `report` as each finishes.
    pub fn run_all(&mut self, report: impl FnMut(&Outcome)) -> Vec<Outcome> {
        let ids: Vec<u8> = Suite::criteria().iter().map(|(id, _)| *id).collect();
        self.run_selected(&ids, report)
    }

    /// Runs the given criteria in order, calling `report` as each finishes.
    pub fn run_selected(&mut self, ids: &[u8], mut report: impl FnMut(&Outcome)) -> Vec<Outcome> {
        ids.iter()
            .map(|id| {
                let outcome = self.run(*id);
                report(&outcome);
                outcome
            })
            .collect()
    }

    fn fine_ground_state(&mut self, dim: usize, b: f64) -> icnls_core::Result<&GroundState> {
        let key = (dim, b.to_bits());
        if let Entry::Vacant(slot) = self.fine.entry(key) {
            let p = ModelParams::critical(dim, b)?;
            slot.insert(solve_ground_state(&p, &grid(dim, FINE.0, FINE.1))?);
        }
        Ok(&self.fine[&key])
    }

    fn criterion_2(&mut self, start: Instant) -> Evaluation {
        let mut c = Checks::default();
        for (dim, b) in CASES {
            let p = ModelParams::critical(dim, b)?;
            let gs = self.fine_ground_state(dim, b)?;
            let (e, r) = pohozaev_check(gs, &p)?;
            c.at_most(format!("{} |E|/P", tag(dim, b)), e, 1e-5);
            c.at_most(format!("{} |P - M/sigma|/P", tag(dim, b)), r, 1e-5);
        }
        c.runtime(start, 30.0);
        Ok(c)
    }

    fn criterion_3(&mut self) -> Evaluation {
        let mut c = Checks::default();
        for (dim, b) in CASES {
            let u1 = self.fine_ground_state(dim, b)?.clone();
            let n1 = u1.diagnostics.mass_sq.sqrt();
            for omega in [0.5, 2.0] {
                let p = ModelParams::critical(dim, b)?.with_omega(omega)?;
                let resolved = solve_ground_state(&p, &grid(dim, FINE.0, FINE.1))?;
                let drift = (resolved.diagnostics.mass_sq.sqrt() / n1 - 1.0).abs();
                c.at_most(format!("{} w={omega} re-solved", tag(dim, b)), drift, 1e-3);
                let rescaled = branch(&u1, omega)?;
                let drift = (rescaled.diagnostics.mass_sq.sqrt() / n1 - 1.0).abs();
                c.at_most(format!("{} w={omega} rescaled", tag(dim, b)), drift, 1e-6);
            }
        }
        Ok(c)
    }

    fn criterion_4(&mut self) -> Evaluation {
        let (trials, seed) = (self.trials, self.seed);
        let mut c = Checks::default();
        for (dim, b) in CASES {
            let p = ModelParams::critical(dim, b)?;
            let psi = self.fine_ground_state(dim, b)?;
            let report = report_from(psi);
            let check = verify_interpolation(&p, &report, psi.profile.grid_arc(), trials, seed)?;
            c.holds(
                format!(
                    "{} violations {}/{}",
                    tag(dim, b),
                    check.violations,
                    check.trials
                ),
                check.violations == 0 && check.trials > 0,
            );
            let j = weinstein_j(&psi.profile, &p)?;
            c.at_most(
                format!("{} |J(psi)/m - 1|", tag(dim, b)),
                (j / report.m - 1.0).abs(),
                1e-6,
            );
            c.holds(
                format!(
                    "{} min trial J/m = {:.4}",
                    tag(dim, b),
                    check.min_weinstein / report.m
                ),
                check.min_weinstein >= report.m * (1.0 - 1e-9),
            );
        }
        Ok(c)
    }

    fn criterion_8(&mut self) -> Evaluation {
        let mut c = Checks::default();
        for (dim, b) in CASES {
            let psi = self.fine_ground_state(dim, b)?;
            let d: Vec<f64> = [0.1, 0.05, 0.025]
                .iter()
                .map(|&a| initial_distance(&psi.profile, a).h1_total)
                .collect();
            c.holds(
                format!("{} strictly decreasing", tag(dim, b)),
                d[1] < d[0] && d[2] < d[1],
            );
            for (k, pair) in d.windows(2).enumerate() {
                let ratio = pair[1] / pair[0];
                c.holds(
                    format!(
                        "{} ratio {} = {ratio:.5} in [0.225, 0.275]",
                        tag(dim, b),
                        k + 1
                    ),
                    (0.225..=0.275).contains(&ratio),
                );
            }
        }
        Ok(c)
    }
}

fn criterion_1() -> Evaluation {
    let start = Instant::now();
    let mut c = Checks::default();
    let p = ModelParams::critical(1, 0.0)?;
    let gs = solve_ground_state(&p, &grid(1, 15.0, 4096))?;
    let report = report_from(&gs);
    let amp = 3f64.powf(0.25);
    c.within("alpha", gs.alpha, amp, 1e-5);
    c.within("mass_sq", gs.diagnostics.mass_sq, 2.7206990, 1e-4);
    c.within("C", report.best_constant, 0.4052848, 1e-4);
    let err = gs
        .profile
        .grid()
        .nodes()
        .iter()
        .zip(gs.profile.values())
        .map(|(r, u)| (u - amp / (2.0 * r).cosh().sqrt()).abs())
        .fold(0.0, f64::max);
    c.at_most("max pointwise error", err, 1e-5);
    c.runtime(start, 5.0);
    Ok(c)
}

/// Grid and step safety factor of the conservation runs, per `(N, b)`.
pub const CONSERVATION_RUNS: [(usize, f64, usize, f64); 3] = [
    (1, 0.5, 4096, 0.004),
    (2, 1.0, 2048, 0.005),
    (3, 1.0, 2048, 0.02),
];

fn criterion_5(start: Instant) -> Evaluation {
    let mut c = Checks::default();
    for (dim, b, cells, c_dt) in CONSERVATION_RUNS {
        let p = ModelParams::critical(dim, b)?;
        let psi = solve_ground_state(&p, &grid(dim, 20.0, cells))?;
        let report = report_from(&psi);
        let phi0 = psi.profile.scaled(0.9).to_complex();
        let bound = match gradient_bound(&phi0, &p, &report)? {
            GradientBound::Bounded(v) => v,
            GradientBound::Unbounded => return Err("0.9 psi has no finite gradient bound".into()),
        };
        let controls = EvolveControls {
            t_max: 10.0,
            dt0: 1e-3,
            c_dt,
            ..Default::default()
        };
        let traj = propagate(&phi0, &p, &controls)?;
        let t = tag(dim, b);
        c.holds(
            format!("{t} verdict {}", traj.verdict.name()),
            traj.verdict == Verdict::GlobalToTmax,
        );
        c.at_most(
            format!("{t} mass drift"),
            traj.relative_drift(|s| s.mass_sq),
            1e-8,
        );
        c.at_most(
            format!("{t} energy drift"),
            traj.relative_drift(|s| s.energy),
            1e-5,
        );
        let worst = traj
            .samples
            .iter()
            .map(|s| s.grad_norm * s.grad_norm / bound)
            .fold(0.0, f64::max);
        c.at_most(format!("{t} max |grad|^2 / bound - 1"), worst - 1.0, 1e-3);
    }
    c.runtime(start, 120.0);
    Ok(c)
}

fn criterion_6() -> Evaluation {
    let mut c = Checks::default();
    for (dim, b, cells, _) in CONSERVATION_RUNS {
        let p = ModelParams::critical(dim, b)?;
        let psi = solve_ground_state(&p, &grid(dim, 20.0, cells))?;
        let controls = EvolveControls {
            t_max: 1.0,
            dt0: 1e-3,
            c_dt: 0.01,
            ..Default::default()
        };
        let traj = propagate(&psi.profile.to_complex(), &p, &controls)?;
        let peak = sup_norm(&psi.profile);
        let drift = traj
            .final_state
            .values()
            .iter()
            .zip(psi.profile.values())
            .map(|(z, u)| (z.norm() - u).abs())
            .fold(0.0, f64::max)
            / peak;
        c.at_most(format!("{} modulus drift at t=1", tag(dim, b)), drift, 1e-4);
    }
    Ok(c)
}

/// Step safety factor of the self-similar runs, per `(N, b)`.
pub const SELF_SIMILAR_RUNS: [(usize, f64, f64); 2] = [(1, 0.5, 0.02), (2, 1.0, 0.05)];
/// Truncation radius of the self-similar runs.
pub const SELF_SIMILAR_R_MAX: f64 = 11.0;
/// Blow-up factor of the self-similar runs.
pub const SELF_SIMILAR_BLOWUP_FACTOR: f64 = 15.0;

fn criterion_7(start: Instant) -> Evaluation {
    let mut c = Checks::default();
    let checkpoints: Vec<f64> = (1..=8).map(|k| k as f64 / 10.0).collect();
    for (dim, b, c_dt) in SELF_SIMILAR_RUNS {
        let p = ModelParams::critical(dim, b)?;
        let g = grid(dim, SELF_SIMILAR_R_MAX, 8192);
        let psi = solve_ground_state(&p, &g)?;
        let t = tag(dim, b);
        c.at_most(
            format!("{t} t=0 tail mass"),
            tail_mass_fraction(&psi.profile, 0.1),
            1e-8,
        );
        let ss = SelfSimilar::new(&psi.profile, &p, 1.0)?;
        let controls = EvolveControls {
            t_max: 2.0,
            dt0: 1e-3,
            c_dt,
            blowup_factor: SELF_SIMILAR_BLOWUP_FACTOR,
            checkpoints: checkpoints.clone(),
            ..Default::default()
        };
        let traj = propagate(&ss.at(0.0, &g)?, &p, &controls)?;
        let mut worst = 0.0f64;
        for &tc in &checkpoints {
            let num = traj.snapshot_at(tc).ok_or("missing checkpoint snapshot")?;
            let exact = ss.at(tc, &g)?;
            worst = worst.max(relative_l2(num, &exact));
        }
        c.at_most(format!("{t} closed-form rel L2 on [0, 0.8]"), worst, 1e-2);
        c.at_most(
            format!("{t} mass drift"),
            traj.relative_drift(|s| s.mass_sq),
            1e-8,
        );
        match traj.verdict {
            Verdict::BlowupDetected {
                t_estimate,
                fit_quality,
                ..
            } => {
                c.within(
                    format!("{t} T_estimate"),
                    t_estimate.unwrap_or(f64::NAN),
                    1.0,
                    0.05,
                );
                c.at_least(
                    format!("{t} fit quality"),
                    fit_quality.unwrap_or(f64::NAN),
                    0.999,
                );
            }
            other => c.holds(format!("{t} verdict {}", other.name()), false),
        }
        let rates = rate_check(&traj, 1.0)?;
        c.within(format!("{t} p"), rates.p, 1.0, 0.1);
        c.within(format!("{t} q"), rates.q, dim as f64 / 2.0, 0.1);
    }
    c.runtime(start, 300.0);
    Ok(c)
}

fn relative_l2(a: &ComplexField, b: &ComplexField) -> f64 {
    let diff = a.sub(b).expect("same grid");
    (mass_sq(&diff) / mass_sq(b)).sqrt()
}

fn criterion_9() -> Evaluation {
    let mut c = Checks::default();
    for (dim, b) in CASES {
        let p = ModelParams::critical(dim, b)?;
        let psi = solve_ground_state(&p, &grid(dim, 20.0, 2048))?;
        let controls = EvolveControls {
            t_max: 20.0,
            ..Default::default()
        };
        let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
        let runs = scan_multipliers(&psi, &[0.9, 1.1], &controls, threads);
        let t = tag(dim, b);
        c.holds(
            format!("{t} c=0.9 {}", runs[0].verdict),
            runs[0].verdict_is("Global-to-t_max"),
        );
        let fired = runs[1].t_detect.is_some_and(|td| td <= 20.0);
        c.holds(
            format!(
                "{t} c=1.1 {} at t={:.3}",
                runs[1].verdict,
                runs[1].t_detect.unwrap_or(f64::NAN)
            ),
            runs[1].verdict_is("BlowupDetected") && fired,
        );
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn outcome(checks: Vec<Check>, error: Option<String>) -> Outcome {
        Outcome {
            id: 1,
            title: "t",
            checks,
            elapsed: Duration::ZERO,
            error,
        }
    }

    #[test]
    fn failing_checks_are_listed() {
        let o = outcome(
            vec![
                Check {
                    label: "good".into(),
                    passed: true,
                },
                Check {
                    label: "bad".into(),
                    passed: false,
                },
            ],
            None,
        );
        assert!(!o.passed());
        let line = o.line();
        assert!(line.starts_with("FAIL criterion 1"));
        assert!(line.ends_with(": bad"), "{line}");
    }

    #[test]
    fn empty_or_errored_outcomes_fail() {
        assert!(!outcome(Vec::new(), None).passed());
        let ok = vec![Check {
            label: "x".into(),
            passed: true,
        }];
        assert!(outcome(ok.clone(), None).passed());
        assert!(!outcome(ok, Some("boom".into())).passed());
    }

    #[test]
    fn distances_criterion_passes_on_a_coarse_run() {
        let mut suite = Suite::new();
        suite.fine.insert(
            (1, 0.5f64.to_bits()),
            solve_ground_state(
                &ModelParams::critical(1, 0.5).unwrap(),
                &grid(1, 20.0, 2048),
            )
            .unwrap(),
        );
        suite.fine.insert(
            (2, 1.0f64.to_bits()),
            solve_ground_state(
                &ModelParams::critical(2, 1.0).unwrap(),
                &grid(2, 20.0, 2048),
            )
            .unwrap(),
        );
        suite.fine.insert(
            (3, 1.0f64.to_bits()),
            solve_ground_state(
                &ModelParams::critical(3, 1.0).unwrap(),
                &grid(3, 20.0, 2048),
            )
            .unwrap(),
        );
        assert!(suite.run(8).passed());
    }
}

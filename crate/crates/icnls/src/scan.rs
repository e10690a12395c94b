//! Concurrent sweep of mass multipliers `c·ψ`.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use icnls_core::{propagate, EvolveControls, GroundState, Trajectory, Verdict};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct ScanEntry {
    pub c: f64,
    pub verdict: String,
    pub t_end: f64,
    pub t_detect: Option<f64>,
    #[serde(rename = "T_estimate")]
    pub t_estimate: Option<f64>,
    pub fit_quality: Option<f64>,
    pub initial_energy: f64,
    pub max_grad_norm: f64,
    pub mass_drift: f64,
    pub error: Option<String>,
}

impl ScanEntry {
    fn of(c: f64, run: icnls_core::Result<Trajectory>) -> Self {
        match run {
            Ok(t) => {
                let (t_detect, t_estimate, fit_quality) = match t.verdict {
                    Verdict::BlowupDetected {
                        t_detect,
                        t_estimate,
                        fit_quality,
                    } => (Some(t_detect), t_estimate, fit_quality),
                    _ => (None, None, None),
                };
                ScanEntry {
                    c,
                    verdict: t.verdict.name().to_string(),
                    t_end: t.samples.last().map_or(0.0, |s| s.t),
                    t_detect,
                    t_estimate,
                    fit_quality,
                    initial_energy: t.samples[0].energy,
                    max_grad_norm: t.max_grad_norm(),
                    mass_drift: t.relative_drift(|s| s.mass_sq),
                    error: None,
                }
            }
            Err(e) => ScanEntry {
                c,
                verdict: "Error".into(),
                t_end: 0.0,
                t_detect: None,
                t_estimate: None,
                fit_quality: None,
                initial_energy: f64::NAN,
                max_grad_norm: f64::NAN,
                mass_drift: f64::NAN,
                error: Some(e.to_string()),
            },
        }
    }

    pub fn verdict_is(&self, name: &str) -> bool {
        self.verdict == name
    }
}

/// Propagates `c·ψ` for each multiplier on up to `threads` workers. Results
/// come back in the order of `multipliers` regardless of scheduling.
pub fn scan_multipliers(
    psi: &GroundState,
    multipliers: &[f64],
    controls: &EvolveControls,
    threads: usize,
) -> Vec<ScanEntry> {
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<ScanEntry>>> = Mutex::new(vec![None; multipliers.len()]);
    let workers = threads.clamp(1, multipliers.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&c) = multipliers.get(i) else { break };
                let phi0 = psi.profile.scaled(c).to_complex();
                let entry = ScanEntry::of(c, propagate(&phi0, &psi.params, controls));
                slots.lock().expect("scan slot lock")[i] = Some(entry);
            });
        }
    });
    slots
        .into_inner()
        .expect("scan slot lock")
        .into_iter()
        .map(|e| e.expect("every multiplier is processed"))
        .collect()
}

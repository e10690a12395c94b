//! JSON and CSV schemas for fields, reports and trajectories.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use icnls_core::groundstate::Diagnostics;
use icnls_core::{
    BlowupFit, ComplexField, GroundState, InitialDistance, MinimizationReport, ModelParams,
    RadialGrid, RateReport, RealField, Sample, Trajectory, Verdict,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamsJson {
    #[serde(rename = "N")]
    pub dim: usize,
    pub b: f64,
    pub sigma: f64,
    pub omega: f64,
}

impl From<&ModelParams> for ParamsJson {
    fn from(p: &ModelParams) -> Self {
        ParamsJson {
            dim: p.dim,
            b: p.b,
            sigma: p.sigma,
            omega: p.omega,
        }
    }
}

impl ParamsJson {
    pub fn to_params(self) -> icnls_core::Result<ModelParams> {
        ModelParams::new(self.dim, self.b, self.sigma, self.omega)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridJson {
    pub r_max: f64,
    #[serde(rename = "M")]
    pub cells: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsJson {
    pub alpha: f64,
    pub mass_sq: f64,
    pub grad_norm_sq: f64,
    pub potential_i: f64,
    pub weinstein_j: f64,
    pub energy: f64,
    pub residual: f64,
    pub r_match: f64,
    pub bisection_steps: usize,
    pub newton_steps: usize,
    pub basin_transitions: usize,
}

impl DiagnosticsJson {
    pub fn of(g: &GroundState) -> Self {
        let Diagnostics {
            mass_sq,
            grad_norm_sq,
            potential,
            weinstein,
            energy,
            residual,
        } = g.diagnostics;
        DiagnosticsJson {
            alpha: g.alpha,
            mass_sq,
            grad_norm_sq,
            potential_i: potential,
            weinstein_j: weinstein,
            energy,
            residual,
            r_match: g.r_match,
            bisection_steps: g.bisection_steps,
            newton_steps: g.newton_steps,
            basin_transitions: g.basin_transitions,
        }
    }
}

/// Serialized radial field; `im` is absent for real fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldJson {
    pub params: ParamsJson,
    pub grid: GridJson,
    pub re: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<DiagnosticsJson>,
}

/// A field read back from disk.
#[derive(Debug, Clone)]
pub struct LoadedField {
    pub params: ModelParams,
    pub field: ComplexField,
    pub is_real: bool,
    pub diagnostics: Option<DiagnosticsJson>,
}

impl FieldJson {
    pub fn real(field: &RealField, params: &ModelParams) -> Self {
        FieldJson {
            params: params.into(),
            grid: grid_json(field.grid()),
            re: field.values().to_vec(),
            im: None,
            diagnostics: None,
        }
    }

    pub fn complex(field: &ComplexField, params: &ModelParams) -> Self {
        FieldJson {
            params: params.into(),
            grid: grid_json(field.grid()),
            re: field.values().iter().map(|z| z.re).collect(),
            im: Some(field.values().iter().map(|z| z.im).collect()),
            diagnostics: None,
        }
    }

    pub fn ground_state(g: &GroundState) -> Self {
        let mut json = FieldJson::real(&g.profile, &g.params);
        json.diagnostics = Some(DiagnosticsJson::of(g));
        json
    }

    pub fn load(self) -> icnls_core::Result<LoadedField> {
        let params = self.params.to_params()?;
        let grid = Arc::new(RadialGrid::new(
            params.dim,
            self.grid.r_max,
            self.grid.cells,
        )?);
        let is_real = self.im.is_none();
        let values = match self.im {
            None => self
                .re
                .into_iter()
                .map(|x| Complex64::new(x, 0.0))
                .collect(),
            Some(im) => {
                if im.len() != self.re.len() {
                    return Err(icnls_core::Error::InvalidGrid(
                        "re and im have different lengths".into(),
                    ));
                }
                self.re
                    .into_iter()
                    .zip(im)
                    .map(|(x, y)| Complex64::new(x, y))
                    .collect()
            }
        };
        let field = ComplexField::new(grid, values)?;
        Ok(LoadedField {
            params,
            field,
            is_real,
            diagnostics: self.diagnostics,
        })
    }
}

fn grid_json(grid: &RadialGrid) -> GridJson {
    GridJson {
        r_max: grid.r_max(),
        cells: grid.cells(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    #[serde(rename = "N")]
    pub dim: usize,
    pub b: f64,
    pub sigma: f64,
    pub critical_mass: f64,
    pub best_constant: f64,
    pub j_at_psi: f64,
    pub m: f64,
}

impl From<&MinimizationReport> for ReportJson {
    fn from(r: &MinimizationReport) -> Self {
        ReportJson {
            dim: r.dim,
            b: r.b,
            sigma: r.sigma,
            critical_mass: r.critical_mass,
            best_constant: r.best_constant,
            j_at_psi: r.j_at_psi,
            m: r.m,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub verdict: String,
    #[serde(rename = "T_estimate")]
    pub t_estimate: Option<f64>,
    pub fit_quality: Option<f64>,
    pub max_grad_norm: f64,
    pub t_end: f64,
    pub steps: usize,
    pub tail_warning: Option<TailWarningJson>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailWarningJson {
    pub t: f64,
    pub fraction: f64,
}

impl VerdictJson {
    pub fn of(trajectory: &Trajectory) -> Self {
        let (t_estimate, fit_quality) = match trajectory.verdict {
            Verdict::BlowupDetected {
                t_estimate,
                fit_quality,
                ..
            } => (t_estimate, fit_quality),
            _ => (None, None),
        };
        VerdictJson {
            verdict: trajectory.verdict.name().to_string(),
            t_estimate,
            fit_quality,
            max_grad_norm: trajectory.max_grad_norm(),
            t_end: trajectory.samples.last().map_or(0.0, |s| s.t),
            steps: trajectory.steps,
            tail_warning: trajectory.tail_warning.map(|w| TailWarningJson {
                t: w.t,
                fraction: w.fraction,
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceJson {
    pub a: f64,
    pub l2_part: f64,
    pub grad_part: f64,
    pub h1_total: f64,
}

impl From<&InitialDistance> for DistanceJson {
    fn from(d: &InitialDistance) -> Self {
        DistanceJson {
            a: d.a,
            l2_part: d.l2_part,
            grad_part: d.grad_part,
            h1_total: d.h1_total,
        }
    }
}

/// Pseudoconformal report. `T` is `null` for an infinite lifespan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudoReportJson {
    pub a: f64,
    #[serde(rename = "T")]
    pub t: Option<f64>,
    pub p_fit: Option<f64>,
    pub q_fit: Option<f64>,
    pub fit_quality: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub not_blowup: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blowup: Option<BlowupFitJson>,
    pub distances: Vec<DistanceJson>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupFitJson {
    #[serde(rename = "T_estimate")]
    pub t_estimate: f64,
    pub fit_quality: f64,
    pub window_start: f64,
    pub samples_used: usize,
}

impl From<&BlowupFit> for BlowupFitJson {
    fn from(f: &BlowupFit) -> Self {
        BlowupFitJson {
            t_estimate: f.t_estimate,
            fit_quality: f.fit_quality,
            window_start: f.window_start,
            samples_used: f.samples_used,
        }
    }
}

impl PseudoReportJson {
    pub fn new(a: f64, lifespan: f64) -> Self {
        PseudoReportJson {
            a,
            t: lifespan.is_finite().then_some(lifespan),
            p_fit: None,
            q_fit: None,
            fit_quality: None,
            not_blowup: None,
            blowup: None,
            distances: Vec::new(),
        }
    }

    pub fn with_rates(mut self, rates: &RateReport) -> Self {
        self.p_fit = Some(rates.p);
        self.q_fit = Some(rates.q);
        self.fit_quality = Some(rates.fit_quality());
        self.not_blowup = Some(rates.not_blowup);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct SampleRow {
    t: f64,
    mass_sq: f64,
    energy: f64,
    grad_norm: f64,
    sup_norm: f64,
    dt: f64,
}

impl From<&Sample> for SampleRow {
    fn from(s: &Sample) -> Self {
        SampleRow {
            t: s.t,
            mass_sq: s.mass_sq,
            energy: s.energy,
            grad_norm: s.grad_norm,
            sup_norm: s.sup_norm,
            dt: s.dt,
        }
    }
}

/// Writes the observables as CSV with header `t,mass_sq,energy,grad_norm,sup_norm,dt`.
pub fn write_trajectory_csv(samples: &[Sample], out: impl Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for s in samples {
        w.serialize(SampleRow::from(s))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trajectory_csv(input: impl std::io::Read) -> csv::Result<Vec<Sample>> {
    csv::Reader::from_reader(input)
        .deserialize::<SampleRow>()
        .map(|row| {
            row.map(|r| Sample {
                t: r.t,
                mass_sq: r.mass_sq,
                energy: r.energy,
                grad_norm: r.grad_norm,
                sup_norm: r.sup_norm,
                dt: r.dt,
            })
        })
        .collect()
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = to_json_string(value);
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn read_field(path: &Path) -> CliResult<LoadedField> {
    let json: FieldJson = read_json(path)?;
    json.load().map_err(|e| CliError::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn write_csv(path: &Path, samples: &[Sample]) -> CliResult<()> {
    let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    write_trajectory_csv(samples, std::io::BufWriter::new(file)).map_err(|e| CliError::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

//! Time-dependent radial propagation of
//! `i ∂t φ + Δφ + |x|^{-b}|φ|^{2σ}φ = 0`.
//!
//! One step is a Strang splitting: half a nonlinear substep, a full
//! Crank–Nicolson substep for the linear part, half a nonlinear substep. The
//! nonlinear substep is exact because `|φ|` is invariant under it; the linear
//! substep is unitary in the weighted inner product because the discrete
//! Laplacian is symmetric there. Mass is therefore conserved to round-off.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{ComplexField, Field};
use crate::functional::{self, Functionals};
use crate::grid::RadialGrid;
use crate::groundstate::MinimizationReport;
use crate::params::ModelParams;
use crate::regression::fit_line;

#[derive(Debug, Clone, PartialEq)]
pub struct EvolveControls {
    /// Largest step.
    pub dt0: f64,
    /// Steps below this end the run with [`Verdict::StepCollapse`].
    pub dt_min: f64,
    /// Safety factor on the nonlinear rotation rate.
    pub c_dt: f64,
    pub t_max: f64,
    /// Blow-up is declared once `‖∇φ‖₂` exceeds this multiple of its initial
    /// value.
    pub blowup_factor: f64,
    /// Also declare blow-up once the width `‖φ‖₂/‖∇φ‖₂` drops below this many
    /// cells; zero disables the check.
    pub resolution_cells: f64,
    /// Record observables every this many steps.
    pub output_stride: usize,
    /// Warn when more than this fraction of the mass sits in the outer 10% of
    /// the grid.
    pub tail_limit: Option<f64>,
    /// Stop the run (rather than only warn) when the tail monitor fires.
    pub abort_on_tail: bool,
    /// Times the stepper lands on exactly and stores a snapshot.
    pub checkpoints: Vec<f64>,
    /// Store a snapshot every this many recorded samples; zero for none.
    pub snapshot_stride: usize,
}

impl Default for EvolveControls {
    fn default() -> Self {
        EvolveControls {
            dt0: 1e-3,
            dt_min: 1e-10,
            c_dt: 0.1,
            t_max: 10.0,
            blowup_factor: 1e3,
            resolution_cells: 8.0,
            output_stride: 10,
            tail_limit: Some(1e-6),
            abort_on_tail: false,
            checkpoints: Vec::new(),
            snapshot_stride: 0,
        }
    }
}

impl EvolveControls {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParams(m.into()));
        if !(self.dt_min > 0.0 && self.dt_min < self.dt0) {
            return bad("need 0 < dt_min < dt0");
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return bad("t_max must be positive");
        }
        if !(self.c_dt > 0.0) {
            return bad("c_dt must be positive");
        }
        if !(self.blowup_factor > 1.0) {
            return bad("blowup_factor must exceed 1");
        }
        if self.output_stride == 0 {
            return bad("output_stride must be at least 1");
        }
        if !(self.resolution_cells >= 0.0) {
            return bad("resolution_cells must be non-negative");
        }
        Ok(())
    }
}

/// Observables at one recorded time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub mass_sq: f64,
    pub energy: f64,
    /// `‖∇φ‖₂` (not squared).
    pub grad_norm: f64,
    pub sup_norm: f64,
    /// Step that led to this sample; zero for the initial sample.
    pub dt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    GlobalToTmax,
    BlowupDetected {
        t_detect: f64,
        /// `None` when the fit window was too short.
        t_estimate: Option<f64>,
        fit_quality: Option<f64>,
    },
    StepCollapse {
        t: f64,
    },
    TailMassExceeded {
        t: f64,
        fraction: f64,
    },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::GlobalToTmax => "Global-to-t_max",
            Verdict::BlowupDetected { .. } => "BlowupDetected",
            Verdict::StepCollapse { .. } => "StepCollapse",
            Verdict::TailMassExceeded { .. } => "TailMassExceeded",
        }
    }

    pub fn is_blowup(&self) -> bool {
        matches!(self, Verdict::BlowupDetected { .. })
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub snapshots: Vec<(f64, ComplexField)>,
    pub verdict: Verdict,
    /// State when the run stopped.
    pub final_state: ComplexField,
    pub steps: usize,
    /// First recorded time the tail monitor fired.
    pub tail_warning: Option<TailWarning>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailWarning {
    pub t: f64,
    /// Fraction of the mass in the outer 10% of the grid.
    pub fraction: f64,
}

impl Trajectory {
    pub fn max_grad_norm(&self) -> f64 {
        self.samples.iter().map(|s| s.grad_norm).fold(0.0, f64::max)
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    /// Largest `|X(t)/X(0) − 1|` over recorded samples.
    pub fn relative_drift(&self, observable: impl Fn(&Sample) -> f64) -> f64 {
        let Some(first) = self.samples.first() else {
            return 0.0;
        };
        let x0 = observable(first);
        if x0 == 0.0 {
            return self
                .samples
                .iter()
                .map(|s| observable(s).abs())
                .fold(0.0, f64::max);
        }
        self.samples
            .iter()
            .map(|s| (observable(s) / x0 - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn snapshot_at(&self, t: f64) -> Option<&ComplexField> {
        self.snapshots
            .iter()
            .find(|(ts, _)| (ts - t).abs() <= 1e-12 * t.abs().max(1.0))
            .map(|(_, f)| f)
    }
}

/// Split-step propagator for one grid and model. Holds the banded matrices
/// and scratch space so stepping does not allocate.
#[derive(Debug, Clone)]
pub struct Propagator {
    grid: Arc<RadialGrid>,
    funcs: Functionals,
    potential: Vec<f64>,
    power: Power,
    stiff_diag: Vec<f64>,
    stiff_off: Vec<f64>,
    /// Diagonal of `W − iτA`.
    diag: Vec<Complex64>,
    /// Off-diagonal of `W − iτA`.
    off: Vec<Complex64>,
    /// Thomas factorization: reciprocal pivots and modified super-diagonal.
    inv_pivot: Vec<Complex64>,
    sweep: Vec<Complex64>,
    cached_dt: f64,
}

/// `x ↦ x^σ` with cheap paths for the exponents that occur at small `N`.
#[derive(Debug, Clone, Copy)]
enum Power {
    Half,
    One,
    ThreeHalves,
    Two,
    General(f64),
}

impl Power {
    fn new(sigma: f64) -> Self {
        match sigma {
            0.5 => Power::Half,
            1.0 => Power::One,
            1.5 => Power::ThreeHalves,
            2.0 => Power::Two,
            s => Power::General(s),
        }
    }

    #[inline]
    fn eval(self, x: f64) -> f64 {
        match self {
            Power::Half => libm::sqrt(x),
            Power::One => x,
            Power::ThreeHalves => x * libm::sqrt(x),
            Power::Two => x * x,
            Power::General(s) => libm::pow(x, s),
        }
    }
}

impl Propagator {
    pub fn new(params: &ModelParams, grid: Arc<RadialGrid>) -> Result<Self> {
        params.validate()?;
        if grid.dim() != params.dim {
            return Err(Error::InvalidGrid(
                "grid and model dimensions differ".into(),
            ));
        }
        let funcs = Functionals::new(&grid, params);
        let potential = grid.effective_potential(params.b);
        let (stiff_diag, stiff_off) = funcs.laplacian.stiffness_bands();
        let m = grid.cells();
        let zero = Complex64::new(0.0, 0.0);
        Ok(Propagator {
            grid,
            funcs,
            potential,
            power: Power::new(params.sigma),
            stiff_diag,
            stiff_off,
            diag: alloc::vec![zero; m],
            off: alloc::vec![zero; m.saturating_sub(1)],
            inv_pivot: alloc::vec![zero; m],
            sweep: alloc::vec![zero; m],
            cached_dt: f64::NAN,
        })
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn functionals(&self) -> &Functionals {
        &self.funcs
    }

    /// `max_j V_j |φ_j|^{2σ}`: the fastest nonlinear phase rotation.
    pub fn nonlinear_rate(&self, phi: &[Complex64]) -> f64 {
        phi.iter()
            .zip(&self.potential)
            .map(|(p, v)| self.rate_at(*v, p))
            .fold(0.0, f64::max)
    }

    fn rate_at(&self, v: f64, p: &Complex64) -> f64 {
        let m2 = p.norm_sqr();
        if m2 == 0.0 {
            0.0
        } else {
            v * self.power.eval(m2)
        }
    }

    /// Fills `rates` with `V_j |φ_j|^{2σ}` and returns the maximum.
    fn fill_rates(&self, phi: &[Complex64], rates: &mut [f64]) -> f64 {
        let mut max = 0.0f64;
        for ((r, p), v) in rates.iter_mut().zip(phi).zip(&self.potential) {
            *r = self.rate_at(*v, p);
            max = max.max(*r);
        }
        max
    }

    fn rotate(phi: &mut [Complex64], rates: &[f64], h: f64) {
        for (p, r) in phi.iter_mut().zip(rates) {
            if *r != 0.0 {
                let (s, c) = libm::sincos(h * r);
                *p *= Complex64::new(c, s);
            }
        }
    }

    fn factorize(&mut self, dt: f64) {
        let m = self.diag.len();
        let tau = Complex64::new(0.0, 0.5 * dt);
        let w = self.grid.weights();
        for j in 0..m {
            self.diag[j] = Complex64::new(w[j], 0.0) - tau * self.stiff_diag[j];
            if j + 1 < m {
                self.off[j] = -tau * self.stiff_off[j];
            }
        }
        let mut prev = Complex64::new(0.0, 0.0);
        for j in 0..m {
            let pivot = if j == 0 {
                self.diag[0]
            } else {
                self.diag[j] - self.off[j - 1] * prev
            };
            let inv = pivot.inv();
            self.inv_pivot[j] = inv;
            prev = if j + 1 < m {
                self.off[j] * inv
            } else {
                Complex64::new(0.0, 0.0)
            };
            self.sweep[j] = prev;
        }
        self.cached_dt = dt;
    }

    /// Crank–Nicolson substep `(W − iτA)φ⁺ = (W + iτA)φ`, `τ = dt/2`.
    fn linear(&mut self, phi: &mut [Complex64], dt: f64) {
        if self.cached_dt != dt {
            self.factorize(dt);
        }
        let m = phi.len();
        // The right-hand side uses the conjugate matrix; forward elimination is
        // fused with its assembly, overwriting `phi` behind the stencil.
        let mut left = Complex64::new(0.0, 0.0);
        let mut y_prev = Complex64::new(0.0, 0.0);
        for j in 0..m {
            let centre = phi[j];
            let mut rhs = self.diag[j].conj() * centre;
            if j > 0 {
                rhs += self.off[j - 1].conj() * left;
            }
            if j + 1 < m {
                rhs += self.off[j].conj() * phi[j + 1];
            }
            let y = if j == 0 {
                rhs
            } else {
                rhs - self.off[j - 1] * y_prev
            };
            y_prev = y * self.inv_pivot[j];
            left = centre;
            phi[j] = y_prev;
        }
        for j in (0..m.saturating_sub(1)).rev() {
            let next = phi[j + 1];
            phi[j] -= self.sweep[j] * next;
        }
    }

    /// One Strang step in place.
    pub fn step(&mut self, phi: &mut [Complex64], dt: f64, t: f64) -> Result<()> {
        let mut rates = alloc::vec![0.0; phi.len()];
        self.fill_rates(phi, &mut rates);
        self.step_with_rates(phi, &mut rates, dt, t)?;
        Ok(())
    }

    /// Step with `rates` holding the rotation rates of the current state;
    /// on return they hold the rates of the new state and the maximum is
    /// returned. The modulus is invariant under the nonlinear substep, so the
    /// closing half-step and the next opening half-step share one evaluation.
    fn step_with_rates(
        &mut self,
        phi: &mut [Complex64],
        rates: &mut [f64],
        dt: f64,
        t: f64,
    ) -> Result<f64> {
        Self::rotate(phi, rates, 0.5 * dt);
        self.linear(phi, dt);
        let max = self.fill_rates(phi, rates);
        Self::rotate(phi, rates, 0.5 * dt);
        if !max.is_finite() || phi.iter().any(|p| !(p.re.is_finite() && p.im.is_finite())) {
            return Err(Error::StepFailure { t: t + dt });
        }
        Ok(max)
    }

    pub fn sample(&self, phi: &[Complex64], t: f64, dt: f64) -> Sample {
        Sample {
            t,
            mass_sq: self.funcs.mass_sq(phi),
            energy: self.funcs.energy(phi),
            grad_norm: libm::sqrt(self.funcs.grad_norm_sq(phi)),
            sup_norm: phi.iter().map(|p| p.norm()).fold(0.0, f64::max),
            dt,
        }
    }
}

/// One split step of size `dt`.
pub fn step(phi: &ComplexField, dt: f64, params: &ModelParams) -> Result<ComplexField> {
    if !(dt > 0.0) {
        return Err(Error::Domain("time step must be positive".into()));
    }
    let mut prop = Propagator::new(params, phi.grid_arc().clone())?;
    let mut values = phi.values().to_vec();
    prop.step(&mut values, dt, 0.0)?;
    Field::new(phi.grid_arc().clone(), values)
}

/// Blow-up test applied after every step: gradient growth past
/// `blowup_factor` or a width below `resolution_cells` cells.
pub fn detect_blowup(
    current: &Sample,
    initial: &Sample,
    controls: &EvolveControls,
    grid: &RadialGrid,
) -> bool {
    if initial.grad_norm > 0.0 && current.grad_norm > controls.blowup_factor * initial.grad_norm {
        return true;
    }
    if controls.resolution_cells > 0.0 && current.mass_sq > 0.0 {
        let width = libm::sqrt(current.mass_sq) / current.grad_norm;
        return width < controls.resolution_cells * grid.dr();
    }
    false
}

/// Runs [`Propagator::step`] with `dt = min(dt0, c_dt / max V|φ|^{2σ})` until
/// `t_max`, blow-up, step collapse or boundary contact.
pub fn propagate(
    phi0: &ComplexField,
    params: &ModelParams,
    controls: &EvolveControls,
) -> Result<Trajectory> {
    params.require_critical()?;
    controls.validate()?;
    let grid = phi0.grid_arc().clone();
    let mut prop = Propagator::new(params, grid.clone())?;
    let mut phi = phi0.values().to_vec();
    let mut checkpoints: Vec<f64> = controls
        .checkpoints
        .iter()
        .copied()
        .filter(|&c| c > 0.0 && c <= controls.t_max)
        .collect();
    checkpoints.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut next_checkpoint = 0;

    let initial = prop.sample(&phi, 0.0, 0.0);
    let mut samples = alloc::vec![initial];
    let mut snapshots = Vec::new();
    if controls.snapshot_stride > 0 {
        snapshots.push((0.0, phi0.clone()));
    }
    let mut rates = alloc::vec![0.0; phi.len()];
    let mut rate = prop.fill_rates(&phi, &mut rates);
    let mut t = 0.0;
    let mut steps = 0usize;
    let mut tail_warning = None;
    let verdict = loop {
        let remaining = controls.t_max - t;
        if remaining <= 1e-12 * controls.t_max {
            break Verdict::GlobalToTmax;
        }
        let mut dt = ladder_step(controls.dt0, controls.c_dt, rate);
        if dt < controls.dt_min {
            break Verdict::StepCollapse { t };
        }
        let mut landing = None;
        if let Some(&c) = checkpoints.get(next_checkpoint) {
            if t + dt >= c {
                dt = c - t;
                landing = Some(c);
            }
        }
        if dt > remaining {
            dt = remaining;
        }
        match prop.step_with_rates(&mut phi, &mut rates, dt, t) {
            Ok(r) => rate = r,
            Err(_) => break Verdict::StepCollapse { t },
        }
        steps += 1;
        t = match landing {
            Some(c) => c,
            None if dt == remaining => controls.t_max,
            None => t + dt,
        };
        if let Some(c) = landing {
            next_checkpoint += 1;
            snapshots.push((c, Field::from_parts_unchecked(grid.clone(), phi.clone())));
        }
        let probe = Sample {
            grad_norm: libm::sqrt(prop.funcs.grad_norm_sq(&phi)),
            ..initial
        };
        let blowup = detect_blowup(&probe, &initial, controls, &grid);
        let record = blowup || landing.is_some() || steps.is_multiple_of(controls.output_stride);
        if record {
            samples.push(prop.sample(&phi, t, dt));
            if controls.snapshot_stride > 0
                && (samples.len() - 1).is_multiple_of(controls.snapshot_stride)
            {
                snapshots.push((t, Field::from_parts_unchecked(grid.clone(), phi.clone())));
            }
            if let Some(limit) = controls.tail_limit {
                let fraction = tail_fraction(&prop, &phi);
                if fraction > limit && tail_warning.is_none() {
                    tail_warning = Some(TailWarning { t, fraction });
                    if controls.abort_on_tail {
                        break Verdict::TailMassExceeded { t, fraction };
                    }
                }
            }
        }
        if blowup {
            let fit = estimate_blowup_time(&samples).ok();
            break Verdict::BlowupDetected {
                t_detect: t,
                t_estimate: fit.map(|f| f.t_estimate),
                fit_quality: fit.map(|f| f.fit_quality),
            };
        }
    };
    if samples.last().map(|s| s.t) != Some(t) {
        samples.push(prop.sample(&phi, t, samples.last().map_or(0.0, |s| s.dt)));
    }
    Ok(Trajectory {
        samples,
        snapshots,
        verdict,
        final_state: Field::from_parts_unchecked(grid, phi),
        steps,
        tail_warning,
    })
}

/// Rungs per halving of the step ladder.
const LADDER_RUNGS: f64 = 16.0;

/// Largest `dt0·2^{-k/16}` not exceeding `min(dt0, c_dt/rate)`. Quantizing
/// the step lets the linear factorization be reused across steps.
fn ladder_step(dt0: f64, c_dt: f64, rate: f64) -> f64 {
    if !(rate > 0.0) || c_dt / rate >= dt0 {
        return dt0;
    }
    let k = libm::ceil(LADDER_RUNGS * libm::log2(dt0 * rate / c_dt));
    let dt = dt0 * libm::exp2(-k / LADDER_RUNGS);
    if dt * rate > c_dt * (1.0 + 1e-12) {
        dt0 * libm::exp2(-(k + 1.0) / LADDER_RUNGS)
    } else {
        dt
    }
}

fn tail_fraction(prop: &Propagator, phi: &[Complex64]) -> f64 {
    let w = prop.grid.weights();
    let total = prop.funcs.mass_sq(phi);
    if total == 0.0 {
        return 0.0;
    }
    let start = (0.9 * phi.len() as f64) as usize;
    let tail: f64 = (start..phi.len()).map(|j| w[j] * phi[j].norm_sqr()).sum();
    tail / total
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowupFit {
    pub t_estimate: f64,
    /// Coefficient of determination of the linear fit.
    pub fit_quality: f64,
    pub window_start: f64,
    pub samples_used: usize,
}

/// Fits `1/‖∇φ(t)‖₂` linearly in `t` over the last decade of growth (samples
/// after the last time the gradient was below a tenth of its maximum). At the
/// rate `‖∇φ‖ ~ (T − t)^{-1}` the reciprocal vanishes linearly at `T`.
pub fn estimate_blowup_time(samples: &[Sample]) -> Result<BlowupFit> {
    const MIN_SAMPLES: usize = 10;
    let gmax = samples.iter().map(|s| s.grad_norm).fold(0.0, f64::max);
    if !(gmax > 0.0) {
        return Err(Error::InsufficientData {
            needed: MIN_SAMPLES,
            got: 0,
        });
    }
    let start = samples
        .iter()
        .rposition(|s| s.grad_norm < 0.1 * gmax)
        .map_or(0, |i| i + 1);
    let window = &samples[start..];
    if window.len() < MIN_SAMPLES {
        return Err(Error::InsufficientData {
            needed: MIN_SAMPLES,
            got: window.len(),
        });
    }
    let ts: Vec<f64> = window.iter().map(|s| s.t).collect();
    let ys: Vec<f64> = window.iter().map(|s| 1.0 / s.grad_norm).collect();
    let fit = fit_line(&ts, &ys).ok_or(Error::InsufficientData {
        needed: MIN_SAMPLES,
        got: 1,
    })?;
    if !(fit.slope < 0.0) {
        return Err(Error::Domain(
            "gradient norm is not growing over the fit window".into(),
        ));
    }
    Ok(BlowupFit {
        t_estimate: fit.root(),
        fit_quality: fit.r_squared,
        window_start: ts[0],
        samples_used: window.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GradientBound {
    /// A-priori bound on `‖∇φ(t)‖₂²` for all `t`.
    Bounded(f64),
    /// Mass at or above the critical mass; no bound.
    Unbounded,
}

/// `‖∇φ(t)‖₂² ≤ E(φ₀)/β` with `β = 1 − C_{N,b} ‖φ₀‖₂^{(4−2b)/N} / ((2−b)/N + 1)`,
/// valid when `β > 0`.
pub fn gradient_bound(
    phi0: &ComplexField,
    params: &ModelParams,
    report: &MinimizationReport,
) -> Result<GradientBound> {
    params.require_critical()?;
    let beta = gradient_bound_beta(functional::mass_sq(phi0), params, report);
    if beta <= 1e-12 {
        return Ok(GradientBound::Unbounded);
    }
    Ok(GradientBound::Bounded(
        functional::energy(phi0, params) / beta,
    ))
}

/// The coefficient `β` as a function of `‖φ₀‖₂²`.
pub fn gradient_bound_beta(mass_sq: f64, params: &ModelParams, report: &MinimizationReport) -> f64 {
    let n = params.dim as f64;
    let exponent = (4.0 - 2.0 * params.b) / n;
    1.0 - report.best_constant * libm::pow(mass_sq, exponent / 2.0) / ((2.0 - params.b) / n + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid(dim: usize, r_max: f64, cells: usize) -> Arc<RadialGrid> {
        Arc::new(RadialGrid::new(dim, r_max, cells).unwrap())
    }

    fn gaussian(g: &Arc<RadialGrid>, amp: f64) -> ComplexField {
        ComplexField::from_fn(g.clone(), |r| Complex64::new(amp * libm::exp(-r * r), 0.0)).unwrap()
    }

    #[test]
    fn zero_stays_zero() {
        let p = ModelParams::critical(2, 1.0).unwrap();
        let z = ComplexField::zeros(grid(2, 10.0, 128));
        assert!(step(&z, 1e-3, &p).unwrap().is_zero());
        let controls = EvolveControls {
            t_max: 0.1,
            ..Default::default()
        };
        let traj = propagate(&z, &p, &controls).unwrap();
        assert_eq!(traj.verdict, Verdict::GlobalToTmax);
        assert!(traj
            .samples
            .iter()
            .all(|s| s.mass_sq == 0.0 && s.grad_norm == 0.0));
    }

    #[test]
    fn step_conserves_mass() {
        let p = ModelParams::critical(1, 0.5).unwrap();
        let g = grid(1, 10.0, 1024);
        let phi = gaussian(&g, 1.5);
        let m0 = functional::mass_sq(&phi);
        let next = step(&phi, 1e-3, &p).unwrap();
        assert_relative_eq!(functional::mass_sq(&next), m0, max_relative = 1e-12);
    }

    #[test]
    fn rejects_bad_controls() {
        let c = EvolveControls {
            dt_min: 1.0,
            ..Default::default()
        };
        assert!(c.validate().is_err());
        let c = EvolveControls {
            blowup_factor: 1.0,
            ..Default::default()
        };
        assert!(c.validate().is_err());
        assert!(EvolveControls::default().validate().is_ok());
    }

    #[test]
    fn checkpoints_are_hit_exactly() {
        let p = ModelParams::critical(1, 0.0).unwrap();
        let g = grid(1, 10.0, 256);
        let controls = EvolveControls {
            t_max: 0.05,
            checkpoints: alloc::vec![0.0123, 0.04],
            ..Default::default()
        };
        let traj = propagate(&gaussian(&g, 0.5), &p, &controls).unwrap();
        assert!(traj.snapshot_at(0.0123).is_some());
        assert!(traj.snapshot_at(0.04).is_some());
        assert_eq!(traj.samples.last().unwrap().t, 0.05);
        let ts = traj.times();
        assert!(ts.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn ladder_bounds_step() {
        assert_eq!(ladder_step(1e-3, 0.1, 0.0), 1e-3);
        assert_eq!(ladder_step(1e-3, 0.1, 50.0), 1e-3);
        for rate in [101.0, 317.5, 1e4, 3.3e7] {
            let dt = ladder_step(1e-3, 0.1, rate);
            assert!(dt * rate <= 0.1 * (1.0 + 1e-12));
            assert!(dt * rate > 0.1 * libm::exp2(-1.0 / LADDER_RUNGS) * (1.0 - 1e-12));
        }
    }

    #[test]
    fn synthetic_reciprocal_fit() {
        let samples: Vec<Sample> = (0..=450)
            .map(|i| {
                let t = i as f64 * 1e-3;
                Sample {
                    t,
                    mass_sq: 1.0,
                    energy: 0.0,
                    grad_norm: 1.0 / (1.0 - 2.0 * t),
                    sup_norm: 1.0,
                    dt: 1e-3,
                }
            })
            .collect();
        let fit = estimate_blowup_time(&samples).unwrap();
        assert!((fit.t_estimate - 0.5).abs() < 1e-6);
        assert!(fit.fit_quality >= 1.0 - 1e-9);
    }

    #[test]
    fn fit_needs_ten_samples() {
        let samples: Vec<Sample> = (0..5)
            .map(|i| Sample {
                t: i as f64,
                mass_sq: 1.0,
                energy: 0.0,
                grad_norm: 1.0 + i as f64,
                sup_norm: 1.0,
                dt: 1.0,
            })
            .collect();
        assert!(matches!(
            estimate_blowup_time(&samples),
            Err(Error::InsufficientData { .. })
        ));
    }
}

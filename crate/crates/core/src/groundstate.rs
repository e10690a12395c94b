//! Ground states of `Δu − ω²u + |x|^{-b}|u|^{2σ}u = 0`, the critical mass and
//! the sharp constant of the weighted interpolation inequality
//!
//! ```text
//! ∫ |x|^{-b} |u|^{2σ+2} ≤ C ‖∇u‖₂² ‖u‖₂^{2σ},   σ = (2 − b)/N.
//! ```
//!
//! The amplitude `u(0)` is found by bisection on shot classifications
//! ([`crate::shooting`]). The shot profile is sampled on the grid, extended by
//! the decay envelope `r^{−(N−1)/2} e^{−ωr}` past the matching radius, and then
//! polished by Newton's method onto the discrete equation built from the same
//! Laplacian and potential weights the time stepper uses. The polish makes the
//! discrete residual vanish to round-off, so standing waves are stationary
//! under the discrete flow.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::RealField;
use crate::functional::{self, Functionals};
use crate::grid::RadialGrid;
use crate::interp::MonotoneCubic;
use crate::laplacian::solve_tridiagonal;
use crate::params::ModelParams;
use crate::shooting::{shoot_with, OdeTolerances, Shot};

#[derive(Debug, Clone, Copy)]
pub struct ShootingOptions {
    /// Starting bracket for the amplitude; expanded automatically.
    pub initial_bracket: (f64, f64),
    pub max_expansions: usize,
    /// Stop when the bracket width is below `tol · α`.
    pub tol: f64,
    pub max_bisections: usize,
    /// Profile below `tail_threshold · α` is replaced by the decay envelope.
    pub tail_threshold: f64,
    pub ode: OdeTolerances,
    pub max_newton: usize,
    /// Number of amplitudes sampled across the bracket when looking for more
    /// than one classification change.
    pub basin_probes: usize,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        ShootingOptions {
            initial_bracket: (0.1, 10.0),
            max_expansions: 40,
            tol: 1e-13,
            max_bisections: 60,
            tail_threshold: 1e-8,
            ode: OdeTolerances::default(),
            max_newton: 40,
            basin_probes: 16,
        }
    }
}

/// Scalar diagnostics of a profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub mass_sq: f64,
    pub grad_norm_sq: f64,
    pub potential: f64,
    pub weinstein: f64,
    pub energy: f64,
    pub residual: f64,
}

impl Diagnostics {
    pub fn of(profile: &RealField, params: &ModelParams) -> Self {
        let f = Functionals::new(profile.grid(), params);
        let u = profile.values();
        let mass_sq = f.mass_sq(u);
        let grad_norm_sq = f.grad_norm_sq(u);
        let potential = f.potential(u);
        let weinstein = if potential > 0.0 {
            grad_norm_sq * libm::pow(mass_sq, params.sigma) / potential
        } else {
            f64::NAN
        };
        Diagnostics {
            mass_sq,
            grad_norm_sq,
            potential,
            weinstein,
            energy: grad_norm_sq - potential / (params.sigma + 1.0),
            residual: residual(profile, params),
        }
    }
}

/// A converged positive radial solution.
#[derive(Debug, Clone)]
pub struct GroundState {
    pub profile: RealField,
    pub params: ModelParams,
    pub omega: f64,
    /// Converged shooting amplitude `u(0⁺)` of the continuous problem.
    pub alpha: f64,
    /// Last radius where the shot profile was trusted.
    pub r_match: f64,
    pub diagnostics: Diagnostics,
    pub bisection_steps: usize,
    pub newton_steps: usize,
    /// Classification changes seen across the initial bracket; more than one
    /// means several amplitude basins.
    pub basin_transitions: usize,
}

/// `MinimizationReport`: the infimum of the Weinstein functional and the
/// constants derived from the ground state of `ω = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizationReport {
    pub dim: usize,
    pub b: f64,
    pub sigma: f64,
    /// Infimum of `J`.
    pub m: f64,
    /// `‖ψ‖₂`.
    pub critical_mass: f64,
    /// `C_{N,b} = (σ + 1)/‖ψ‖₂^{2σ}`.
    pub best_constant: f64,
    /// `‖ψ‖₂^{2σ}/(σ + 1)`.
    pub j_at_psi: f64,
}

impl MinimizationReport {
    /// Scale factor turning `ψ` into the unit-coefficient minimizer
    /// `u* = [m(σ+1)]^{−1/(2σ)} ψ` of the Euler–Lagrange equation.
    pub fn minimizer_scale(&self) -> f64 {
        libm::pow(self.m * (self.sigma + 1.0), -1.0 / (2.0 * self.sigma))
    }
}

/// Relative discrete L² norm of `Δu − ω²u + r^{-b}|u|^{2σ}u` over the nodes
/// that do not touch the outer boundary. Zero for the zero field.
pub fn residual(u: &RealField, params: &ModelParams) -> f64 {
    let grid = u.grid();
    let f = Functionals::new(grid, params);
    let mass = f.mass_sq(u.values());
    if mass == 0.0 {
        return 0.0;
    }
    let lap = f.laplacian.apply(u.values());
    let w2 = params.omega * params.omega;
    let m = u.len();
    let mut acc = 0.0;
    for j in 0..m - 1 {
        let v = u.values()[j];
        let pot = f.potential_weights[j] / grid.weights()[j];
        let r = lap[j] - w2 * v + pot * libm::pow(libm::fabs(v), 2.0 * params.sigma) * v;
        acc += grid.weights()[j] * r * r;
    }
    libm::sqrt(acc / mass)
}

fn classify(params: &ModelParams, alpha: f64, r_max: f64, opts: &ShootingOptions) -> Shot {
    shoot_with(params, alpha, r_max, &opts.ode)
}

/// Expands `opts.initial_bracket` (halving the low end, doubling the high end)
/// until the low end undershoots and the high end overshoots.
pub fn auto_bracket(
    params: &ModelParams,
    r_max: f64,
    opts: &ShootingOptions,
) -> Result<(f64, f64)> {
    let (mut lo, mut hi) = opts.initial_bracket;
    for _ in 0..=opts.max_expansions {
        let lo_ok = !classify(params, lo, r_max, opts).class.too_large();
        let hi_ok = classify(params, hi, r_max, opts).class.too_large();
        if lo_ok && hi_ok {
            return Ok((lo, hi));
        }
        if !lo_ok {
            lo *= 0.5;
        }
        if !hi_ok {
            hi *= 2.0;
        }
    }
    Err(Error::NoBracket { lo, hi })
}

fn count_transitions(
    params: &ModelParams,
    lo: f64,
    hi: f64,
    r_max: f64,
    opts: &ShootingOptions,
) -> usize {
    let n = opts.basin_probes.max(2);
    let ratio = hi / lo;
    let mut prev = None;
    let mut transitions = 0;
    for i in 0..n {
        let alpha = lo * libm::pow(ratio, i as f64 / (n - 1) as f64);
        let side = classify(params, alpha, r_max, opts).class.too_large();
        if let Some(p) = prev {
            if p != side {
                transitions += 1;
            }
        }
        prev = Some(side);
    }
    transitions
}

/// Solves for the ground state at `params.omega` on `grid`, bisecting the
/// amplitude inside `bracket`.
pub fn find_ground_state(
    params: &ModelParams,
    grid: &Arc<RadialGrid>,
    bracket: (f64, f64),
    opts: &ShootingOptions,
) -> Result<GroundState> {
    params.validate()?;
    if grid.dim() != params.dim {
        return Err(Error::InvalidGrid(format!(
            "grid dimension {} does not match model dimension {}",
            grid.dim(),
            params.dim
        )));
    }
    let r_max = grid.r_max();
    let (mut lo, mut hi) = bracket;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::NoBracket { lo, hi });
    }
    let lo_side = classify(params, lo, r_max, opts).class.too_large();
    let hi_side = classify(params, hi, r_max, opts).class.too_large();
    if lo_side || !hi_side {
        return Err(Error::NoBracket { lo, hi });
    }
    let basin_transitions = count_transitions(params, lo, hi, r_max, opts);

    let mut steps = 0;
    while hi - lo > opts.tol * hi {
        if steps == opts.max_bisections {
            return Err(Error::NoConvergence {
                what: "amplitude bisection",
                iterations: steps,
            });
        }
        let mid = 0.5 * (lo + hi);
        if classify(params, mid, r_max, opts).class.too_large() {
            hi = mid;
        } else {
            lo = mid;
        }
        steps += 1;
    }
    let alpha = 0.5 * (lo + hi);
    let shot_lo = classify(params, lo, r_max, opts);
    let shot_hi = classify(params, hi, r_max, opts);

    let (mut values, match_index) = splice_profile(params, grid, &shot_lo, &shot_hi, opts);
    let newton_steps = polish(params, grid, &mut values, opts.max_newton)?;
    let profile = RealField::new(grid.clone(), values)?;
    check_shape(&profile, match_index)?;
    let diagnostics = Diagnostics::of(&profile, params);
    if !(diagnostics.residual <= 1e-6) {
        return Err(Error::InvariantViolation(format!(
            "stationary residual {} above 1e-6",
            diagnostics.residual
        )));
    }
    Ok(GroundState {
        profile,
        params: *params,
        omega: params.omega,
        alpha,
        r_match: grid.nodes()[match_index],
        diagnostics,
        bisection_steps: steps,
        newton_steps,
        basin_transitions,
    })
}

/// [`find_ground_state`] with an automatically expanded bracket and default
/// options.
pub fn solve_ground_state(params: &ModelParams, grid: &Arc<RadialGrid>) -> Result<GroundState> {
    let opts = ShootingOptions::default();
    let bracket = auto_bracket(params, grid.r_max(), &opts)?;
    find_ground_state(params, grid, bracket, &opts)
}

/// Samples the two final shots on the grid. Nodes are trusted while both
/// shots are positive, decreasing, above the tail threshold and agree to
/// `1e-6`; the rest is the decay envelope. Returns the values and the index of
/// the matching node.
fn splice_profile(
    params: &ModelParams,
    grid: &RadialGrid,
    lo: &Shot,
    hi: &Shot,
    opts: &ShootingOptions,
) -> (Vec<f64>, usize) {
    let alpha = 0.5 * (lo.alpha + hi.alpha);
    let floor = opts.tail_threshold * alpha;
    let nodes = grid.nodes();
    let mut values = alloc::vec![0.0; nodes.len()];
    let mut last = 0;
    let start = lo.start().max(hi.start());
    for (j, &r) in nodes.iter().enumerate() {
        let u = if r < start {
            let (_, u, _) = crate::shooting::series_start(params, alpha, r / 1e-4);
            u
        } else {
            match (lo.sample(r), hi.sample(r)) {
                (Some((ul, dl)), Some((uh, dh))) => {
                    let avg = 0.5 * (ul + uh);
                    let agree = libm::fabs(ul - uh) <= 1e-6 * avg;
                    if ul > floor && uh > floor && dl < 0.0 && dh < 0.0 && agree {
                        avg
                    } else {
                        break;
                    }
                }
                _ => break,
            }
        };
        values[j] = u;
        last = j;
    }
    let (r_m, u_m) = (nodes[last], values[last]);
    let n1 = (params.dim as f64 - 1.0) / 2.0;
    for j in last + 1..nodes.len() {
        let r = nodes[j];
        values[j] = u_m * libm::pow(r_m / r, n1) * libm::exp(-params.omega * (r - r_m));
    }
    (values, last)
}

/// Newton iterations on `W F(u) = A u − ω² W u + q |u|^{2σ} u = 0`.
/// The Jacobian is symmetric tridiagonal.
fn polish(
    params: &ModelParams,
    grid: &RadialGrid,
    u: &mut [f64],
    max_iter: usize,
) -> Result<usize> {
    let f = Functionals::new(grid, params);
    let (stiff_diag, off) = f.laplacian.stiffness_bands();
    let w = grid.weights();
    let q = &f.potential_weights;
    let w2 = params.omega * params.omega;
    let s2 = 2.0 * params.sigma;
    let m = u.len();
    let mut rhs = alloc::vec![0.0; m];
    let mut diag = alloc::vec![0.0; m];
    let mut lower = alloc::vec![0.0; m];
    let mut upper = alloc::vec![0.0; m];
    let mut scratch = alloc::vec![0.0; m];
    lower[1..].copy_from_slice(&off);
    upper[..m - 1].copy_from_slice(&off);
    let mut prev_update = f64::INFINITY;
    for iter in 0..max_iter {
        f.laplacian.apply_stiffness(u, &mut rhs);
        let scale = u.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        for j in 0..m {
            let p = libm::pow(libm::fabs(u[j]), s2);
            rhs[j] = -(rhs[j] - w2 * w[j] * u[j] + q[j] * p * u[j]);
            diag[j] = stiff_diag[j] - w2 * w[j] + (s2 + 1.0) * q[j] * p;
        }
        solve_tridiagonal(&lower, &diag, &upper, &mut rhs, &mut scratch);
        let mut update = 0.0f64;
        for j in 0..m {
            u[j] += rhs[j];
            update = update.max(rhs[j].abs());
        }
        if !update.is_finite() {
            return Err(Error::NoConvergence {
                what: "Newton polish",
                iterations: iter + 1,
            });
        }
        // quadratic convergence stalls at round-off; stop once updates stop shrinking
        if update <= 1e-14 * scale || (update <= 1e-11 * scale && update >= 0.5 * prev_update) {
            return Ok(iter + 1);
        }
        prev_update = update;
    }
    Err(Error::NoConvergence {
        what: "Newton polish",
        iterations: max_iter,
    })
}

/// No nodes up to the matching radius and radially non-increasing.
fn check_shape(profile: &RealField, match_index: usize) -> Result<()> {
    let u = profile.values();
    let top = u[0];
    if let Some(j) = u[..=match_index].iter().position(|&v| !(v > 0.0)) {
        return Err(Error::InvariantViolation(format!(
            "profile has a node at index {j}"
        )));
    }
    let tol = 1e-10 * top;
    for j in 0..u.len() - 1 {
        if u[j + 1] > u[j] + tol {
            return Err(Error::InvariantViolation(format!(
                "profile increases at index {j}"
            )));
        }
    }
    Ok(())
}

/// Point on the solution branch: `u_ω(r) = ω^{(2−b)/(2σ)} u₁(ωr)`, resampled on
/// the grid of `u1`. At the critical power the exponent is `N/2` and this is an
/// L² scaling. The result is not re-polished.
pub fn branch(u1: &GroundState, omega: f64) -> Result<GroundState> {
    let params = u1.params.with_omega(omega)?;
    let ratio = omega / u1.omega;
    let exponent = (2.0 - params.b) / (2.0 * params.sigma);
    let amp = libm::pow(ratio, exponent);
    let profile = if ratio == 1.0 {
        u1.profile.clone()
    } else {
        let interp = MonotoneCubic::for_field(&u1.profile);
        let values = u1
            .profile
            .grid()
            .nodes()
            .iter()
            .map(|&r| amp * interp.eval(ratio * r))
            .collect();
        RealField::new(u1.profile.grid_arc().clone(), values)?
    };
    let diagnostics = Diagnostics::of(&profile, &params);
    Ok(GroundState {
        profile,
        params,
        omega,
        alpha: amp * u1.alpha,
        r_match: u1.r_match / ratio,
        diagnostics,
        bisection_steps: 0,
        newton_steps: 0,
        basin_transitions: u1.basin_transitions,
    })
}

/// Solves `(E₁)` at the critical power and derives the critical mass and the
/// sharp interpolation constant. The ground state of `(E_{√σ})`, which is the
/// minimizer, is an L² rescaling of the one of `(E₁)`, so both have the same
/// mass.
pub fn minimization_report(
    params: &ModelParams,
    grid: &Arc<RadialGrid>,
) -> Result<(MinimizationReport, GroundState)> {
    params.require_critical()?;
    let unit = params.with_omega(1.0)?;
    let psi = solve_ground_state(&unit, grid)?;
    Ok((report_from(&psi), psi))
}

/// Constants implied by a ground state of `(E₁)`.
pub fn report_from(psi: &GroundState) -> MinimizationReport {
    let sigma = psi.params.sigma;
    let mass_sq = psi.diagnostics.mass_sq;
    let j_at_psi = libm::pow(mass_sq, sigma) / (sigma + 1.0);
    MinimizationReport {
        dim: psi.params.dim,
        b: psi.params.b,
        sigma,
        m: j_at_psi,
        critical_mass: libm::sqrt(mass_sq),
        best_constant: 1.0 / j_at_psi,
        j_at_psi,
    }
}

/// Pohozaev defects `|E(u)|/‖∇u‖₂²` and `|‖∇u‖₂² − ω²‖u‖₂²/σ| / ‖∇u‖₂²`.
/// Both vanish for solutions at the critical power.
pub fn pohozaev_check(g: &GroundState, params: &ModelParams) -> Result<(f64, f64)> {
    pohozaev_defects(&g.profile, &params.with_omega(g.omega)?)
}

/// `|E(u)|/‖∇u‖₂²` and `|‖∇u‖₂² − ω²‖u‖₂²/σ|/‖∇u‖₂²` for any profile `u`.
pub fn pohozaev_defects(u: &RealField, params: &ModelParams) -> Result<(f64, f64)> {
    params.require_critical()?;
    let d = Diagnostics::of(u, params);
    let p = d.grad_norm_sq;
    if p == 0.0 {
        return Err(Error::Domain("Pohozaev defects of the zero field".into()));
    }
    let w2 = params.omega * params.omega;
    let e_defect = libm::fabs(d.energy) / p;
    let ratio_defect = libm::fabs(p - w2 * d.mass_sq / params.sigma) / p;
    Ok((e_defect, ratio_defect))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpolationCheck {
    pub trials: usize,
    pub violations: usize,
    /// Largest `I(u) / (C ‖∇u‖₂² ‖u‖₂^{2σ})` seen; at most 1 when the
    /// inequality holds.
    pub max_ratio: f64,
    /// Smallest Weinstein value among the trial fields.
    pub min_weinstein: f64,
}

/// Random smooth decaying trial field: a sum of one to three Gaussians with
/// random centres, widths, amplitudes and signs. Never identically zero.
pub fn random_trial_field(grid: &Arc<RadialGrid>, rng: &mut impl Rng) -> RealField {
    let r_max = grid.r_max();
    let min_width = (10.0 * grid.dr()).max(0.02 * r_max);
    let max_width = (0.15 * r_max).max(min_width * 1.5);
    loop {
        let count = rng.gen_range(1..=3);
        let bumps: Vec<(f64, f64, f64)> = (0..count)
            .map(|_| {
                let width = rng.gen_range(min_width..max_width);
                let reach = (0.9 * r_max - 5.0 * width).max(0.0);
                let centre = if reach > 0.0 {
                    rng.gen_range(0.0..reach)
                } else {
                    0.0
                };
                let mut amp = rng.gen_range(0.1..3.0);
                if rng.gen_bool(0.3) {
                    amp = -amp;
                }
                (centre, width, amp)
            })
            .collect();
        let values: Vec<f64> = grid
            .nodes()
            .iter()
            .map(|&r| {
                bumps
                    .iter()
                    .map(|&(c, w, a)| {
                        let z = (r - c) / w;
                        a * libm::exp(-z * z)
                    })
                    .sum()
            })
            .collect();
        let field = RealField::new(grid.clone(), values).expect("finite by construction");
        if functional::mass_sq(&field) > 0.0 && functional::grad_norm_sq(&field) > 0.0 {
            return field;
        }
    }
}

/// Checks `I(u) ≤ C ‖∇u‖₂² ‖u‖₂^{2σ} (1 + 1e−9)` on `trials` seeded random
/// fields.
pub fn verify_interpolation(
    params: &ModelParams,
    report: &MinimizationReport,
    grid: &Arc<RadialGrid>,
    trials: usize,
    seed: u64,
) -> Result<InterpolationCheck> {
    params.require_critical()?;
    let f = Functionals::new(grid, params);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut check = InterpolationCheck {
        trials,
        violations: 0,
        max_ratio: 0.0,
        min_weinstein: f64::INFINITY,
    };
    for _ in 0..trials {
        let u = random_trial_field(grid, &mut rng);
        let v = u.values();
        let (p, m, i) = (f.grad_norm_sq(v), f.mass_sq(v), f.potential(v));
        let bound = report.best_constant * p * libm::pow(m, params.sigma);
        if i > bound * (1.0 + 1e-9) {
            check.violations += 1;
        }
        check.max_ratio = check.max_ratio.max(i / bound);
        check.min_weinstein = check.min_weinstein.min(p * libm::pow(m, params.sigma) / i);
    }
    Ok(check)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid(dim: usize, r_max: f64, cells: usize) -> Arc<RadialGrid> {
        Arc::new(RadialGrid::new(dim, r_max, cells).unwrap())
    }

    #[test]
    fn residual_of_zero_is_zero() {
        let p = ModelParams::critical(1, 0.0).unwrap();
        assert_eq!(residual(&RealField::zeros(grid(1, 10.0, 64)), &p), 0.0);
    }

    #[test]
    fn residual_of_closed_form_soliton() {
        let p = ModelParams::critical(1, 0.0).unwrap();
        let g = grid(1, 15.0, 32768);
        let u = RealField::from_fn(g, |r| {
            libm::pow(3.0, 0.25) / libm::sqrt(libm::cosh(2.0 * r))
        })
        .unwrap();
        assert!(residual(&u, &p) < 1e-6, "{}", residual(&u, &p));
    }

    #[test]
    fn residual_of_gaussian_is_order_one() {
        let p = ModelParams::critical(2, 1.0).unwrap();
        let u = RealField::from_fn(grid(2, 10.0, 512), |r| libm::exp(-r * r)).unwrap();
        assert!(residual(&u, &p) > 0.1);
    }

    #[test]
    fn quintic_ground_state() {
        let p = ModelParams::critical(1, 0.0).unwrap();
        let gs = solve_ground_state(&p, &grid(1, 15.0, 4096)).unwrap();
        assert_relative_eq!(gs.alpha, libm::pow(3.0, 0.25), epsilon = 1e-8);
        let mass = libm::sqrt(3.0) * core::f64::consts::PI / 2.0;
        assert_relative_eq!(gs.diagnostics.mass_sq, mass, epsilon = 1e-4);
        assert!(gs.diagnostics.residual < 1e-10);
        assert_eq!(gs.basin_transitions, 1);
    }

    #[test]
    fn no_bracket_is_reported() {
        let p = ModelParams::critical(1, 0.0).unwrap();
        let g = grid(1, 15.0, 512);
        let err = find_ground_state(&p, &g, (0.1, 0.2), &ShootingOptions::default()).unwrap_err();
        assert!(matches!(err, Error::NoBracket { .. }));
        let err = find_ground_state(&p, &g, (5.0, 10.0), &ShootingOptions::default()).unwrap_err();
        assert!(matches!(err, Error::NoBracket { .. }));
    }

    #[test]
    fn branch_identity_and_mass() {
        let p = ModelParams::critical(2, 1.0).unwrap();
        // midpoint quadrature of the resampled profile limits agreement to O(Δr²)
        let gs = solve_ground_state(&p, &grid(2, 20.0, 32768)).unwrap();
        let same = branch(&gs, 1.0).unwrap();
        assert_eq!(same.profile, gs.profile);
        for omega in [0.5, 2.0] {
            let b = branch(&gs, omega).unwrap();
            assert_relative_eq!(
                b.diagnostics.mass_sq,
                gs.diagnostics.mass_sq,
                max_relative = 1e-6
            );
        }
        // (2 − b)/(2σ) = N/2 at the critical power
        assert_relative_eq!((2.0 - p.b) / (2.0 * p.sigma), 1.0);
    }

    #[test]
    fn report_is_consistent() {
        let p = ModelParams::critical(1, 0.0).unwrap();
        let (report, _) = minimization_report(&p, &grid(1, 15.0, 4096)).unwrap();
        assert_relative_eq!(report.best_constant * report.j_at_psi, 1.0, epsilon = 1e-15);
        assert_relative_eq!(report.best_constant, 1.0 / report.m);
        assert_relative_eq!(report.best_constant, 0.4052848, epsilon = 1e-5);
        assert_relative_eq!(report.critical_mass, 1.6494542, epsilon = 1e-5);
    }

    #[test]
    fn minimization_report_needs_critical_power() {
        let p = ModelParams::new(1, 0.0, 1.0, 1.0).unwrap();
        assert!(minimization_report(&p, &grid(1, 15.0, 256)).is_err());
    }
}

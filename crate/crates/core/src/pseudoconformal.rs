//! Pseudoconformal transform, explicit self-similar blow-up solutions built
//! from stationary states, distance estimates for the unstable direction, and
//! blow-up rate fits.
//!
//! For a solution `φ` with lifespan `S` and a parameter `a`, the map
//! `(1−at)^{-N/2} e^{−iar²/(4(1−at))} φ(t/(1−at), r/(1−at))` is again a
//! solution at critical `σ`, with lifespan [`lifespan`]`(a, S)`.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::evolution::Trajectory;
use crate::field::{ComplexField, RealField};
use crate::grid::RadialGrid;
use crate::groundstate::residual;
use crate::interp::MonotoneCubic;
use crate::params::ModelParams;
use crate::regression::fit_line;

/// Largest stationary residual accepted for the profile of a self-similar
/// solution.
pub const PROFILE_RESIDUAL_LIMIT: f64 = 1e-4;

/// Lifespan `T` of the transformed solution; `f64::INFINITY` encodes an
/// infinite lifespan in both arguments and result.
pub fn lifespan(a: f64, s: f64) -> f64 {
    if s.is_infinite() {
        return if a > 0.0 { 1.0 / a } else { f64::INFINITY };
    }
    if a * s <= -1.0 {
        f64::INFINITY
    } else {
        s / (1.0 + a * s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudoParams {
    pub a: f64,
    /// Source lifespan.
    pub s: f64,
    /// Target lifespan.
    pub t: f64,
}

impl PseudoParams {
    pub fn new(a: f64, s: f64) -> Result<Self> {
        if !a.is_finite() || s.is_nan() || s <= 0.0 {
            return Err(Error::Domain(
                "need finite a and positive source lifespan".into(),
            ));
        }
        Ok(PseudoParams {
            a,
            s,
            t: lifespan(a, s),
        })
    }

    /// Scale factor `1 − at`.
    pub fn lambda(&self, t: f64) -> f64 {
        1.0 - self.a * t
    }

    pub fn check_time(&self, t: f64) -> Result<()> {
        if !(t >= 0.0 && t < self.t) {
            return Err(Error::OutOfRange(alloc::format!(
                "t = {t} outside [0, {})",
                self.t
            )));
        }
        Ok(())
    }
}

/// The chirp `e^{−iar²/4}`.
pub fn chirp(a: f64, r: f64) -> Complex64 {
    let (s, c) = libm::sincos(-0.25 * a * r * r);
    Complex64::new(c, s)
}

/// Samples the transform of `source` (a function of time and radius) at time
/// `t` on `grid`.
pub fn transform(
    source: impl Fn(f64, f64) -> Complex64,
    a: f64,
    s: f64,
    t: f64,
    grid: &Arc<RadialGrid>,
) -> Result<ComplexField> {
    let pp = PseudoParams::new(a, s)?;
    pp.check_time(t)?;
    let lambda = pp.lambda(t);
    let amp = libm::pow(lambda, -0.5 * grid.dim() as f64);
    let mapped = t / lambda;
    ComplexField::from_fn(grid.clone(), |r| {
        chirp(a / lambda, r) * source(mapped, r / lambda) * amp
    })
}

/// Self-similar blow-up solution built on a stationary profile `u` of the
/// equation at `ω = 1`.
#[derive(Debug, Clone)]
pub struct SelfSimilar {
    profile: MonotoneCubic,
    dim: usize,
    a: f64,
}

impl SelfSimilar {
    /// Checks that `u` solves the stationary equation at `ω = 1` to within
    /// [`PROFILE_RESIDUAL_LIMIT`].
    pub fn new(u: &RealField, params: &ModelParams, a: f64) -> Result<Self> {
        params.require_critical()?;
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Domain("self-similar solutions need a > 0".into()));
        }
        let unit = params.with_omega(1.0)?;
        let res = residual(u, &unit);
        if !(res <= PROFILE_RESIDUAL_LIMIT) || u.is_zero() {
            return Err(Error::Domain(alloc::format!(
                "profile is not a nontrivial stationary state (residual {res:e})"
            )));
        }
        Ok(SelfSimilar {
            profile: MonotoneCubic::for_field(u),
            dim: u.grid().dim(),
            a,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn blowup_time(&self) -> f64 {
        1.0 / self.a
    }

    /// Closed-form value at `(t, r)`.
    pub fn value(&self, t: f64, r: f64) -> Complex64 {
        let lambda = 1.0 - self.a * t;
        let amp = libm::pow(lambda, -0.5 * self.dim as f64);
        let (s, c) = libm::sincos(t / lambda - 0.25 * self.a * r * r / lambda);
        Complex64::new(c, s) * (amp * self.profile.eval(r / lambda))
    }

    pub fn at(&self, t: f64, grid: &Arc<RadialGrid>) -> Result<ComplexField> {
        if grid.dim() != self.dim {
            return Err(Error::GridMismatch);
        }
        if !(t >= 0.0 && t < self.blowup_time()) {
            return Err(Error::OutOfRange(alloc::format!(
                "t = {t} outside [0, {})",
                self.blowup_time()
            )));
        }
        ComplexField::from_fn(grid.clone(), |r| self.value(t, r))
    }
}

/// `(1−at)^{-N/2} e^{−iar²/(4(1−at))} e^{it/(1−at)} u(r/(1−at))` on `grid`.
pub fn self_similar(
    u: &RealField,
    params: &ModelParams,
    a: f64,
    t: f64,
    grid: &Arc<RadialGrid>,
) -> Result<ComplexField> {
    SelfSimilar::new(u, params, a)?.at(t, grid)
}

/// Squared distances between the chirped profile `e^{−iar²/4}u` and `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialDistance {
    pub a: f64,
    pub l2_part: f64,
    pub grad_part: f64,
    pub h1_total: f64,
}

/// `l2_part = Σ w 4sin²(ar²/8) u²` and
/// `grad_part = Σ |e^{−iar²/4} − 1|²|∇u|² + (a²/4) Σ w r² u²`, with the chirp
/// evaluated in closed form at nodes and cell interfaces.
pub fn initial_distance(u: &RealField, a: f64) -> InitialDistance {
    let grid = u.grid();
    let v = u.values();
    let w = grid.weights();
    let nodes = grid.nodes();
    let defect = |r: f64| {
        let s = libm::sin(0.125 * a * r * r);
        4.0 * s * s
    };
    let l2_part: f64 = (0..v.len())
        .map(|j| w[j] * defect(nodes[j]) * v[j] * v[j])
        .sum();
    let flux = grid.flux_coefficients();
    let mut grad_part = 0.0;
    for k in 1..=v.len() {
        let right = if k < v.len() { v[k] } else { 0.0 };
        let d = right - v[k - 1];
        grad_part += flux[k] * defect(grid.interface(k)) * d * d;
    }
    grad_part += 0.25
        * a
        * a
        * (0..v.len())
            .map(|j| w[j] * nodes[j] * nodes[j] * v[j] * v[j])
            .sum::<f64>();
    InitialDistance {
        a,
        l2_part,
        grad_part,
        h1_total: l2_part + grad_part,
    }
}

/// Exponent fits `‖∇φ(t)‖₂ ~ (1−at)^{-p}` and `‖φ(t)‖_∞ ~ (1−at)^{-q}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateReport {
    pub a: f64,
    pub p: f64,
    pub q: f64,
    pub p_quality: f64,
    pub q_quality: f64,
    pub samples_used: usize,
    /// Set when the gradient fit does not describe a divergence.
    pub not_blowup: bool,
}

impl RateReport {
    pub fn fit_quality(&self) -> f64 {
        self.p_quality.min(self.q_quality)
    }
}

/// Fit window, as fractions of the blow-up time `1/a`.
pub const RATE_WINDOW: (f64, f64) = (0.5, 0.8);
/// Minimum coefficient of determination for a blow-up fit.
pub const RATE_MIN_QUALITY: f64 = 0.99;
/// Minimum gradient exponent counted as divergence.
pub const RATE_MIN_EXPONENT: f64 = 0.25;

/// Log-log regression of the gradient seminorm and the sup norm against
/// `1 − at` over `t ∈ [0.5/a, 0.8/a]`.
pub fn rate_check(trajectory: &Trajectory, a: f64) -> Result<RateReport> {
    const MIN_SAMPLES: usize = 10;
    if !(a > 0.0) {
        return Err(Error::Domain("rate fits need a > 0".into()));
    }
    let (lo, hi) = (RATE_WINDOW.0 / a, RATE_WINDOW.1 / a);
    let window: Vec<_> = trajectory
        .samples
        .iter()
        .filter(|s| s.t >= lo - 1e-12 && s.t <= hi + 1e-12)
        .collect();
    if window.len() < MIN_SAMPLES {
        return Err(Error::InsufficientData {
            needed: MIN_SAMPLES,
            got: window.len(),
        });
    }
    let xs: Vec<f64> = window.iter().map(|s| -libm::log(1.0 - a * s.t)).collect();
    let fit = |ys: Vec<f64>| {
        fit_line(&xs, &ys).ok_or(Error::InsufficientData {
            needed: MIN_SAMPLES,
            got: 1,
        })
    };
    let pf = fit(window.iter().map(|s| libm::log(s.grad_norm)).collect())?;
    let qf = fit(window.iter().map(|s| libm::log(s.sup_norm)).collect())?;
    let not_blowup = !(pf.r_squared >= RATE_MIN_QUALITY && pf.slope >= RATE_MIN_EXPONENT);
    Ok(RateReport {
        a,
        p: pf.slope,
        q: qf.slope,
        p_quality: pf.r_squared,
        q_quality: qf.r_squared,
        samples_used: window.len(),
        not_blowup,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional;
    use crate::groundstate::solve_ground_state;
    use approx::assert_relative_eq;

    fn soliton(grid: &Arc<RadialGrid>) -> RealField {
        let amp = libm::pow(3.0, 0.25);
        RealField::from_fn(grid.clone(), |r| amp / libm::sqrt(libm::cosh(2.0 * r))).unwrap()
    }

    fn quintic() -> ModelParams {
        ModelParams::critical(1, 0.0).unwrap()
    }

    #[test]
    fn lifespan_cases() {
        assert_eq!(lifespan(2.0, f64::INFINITY), 0.5);
        assert_eq!(lifespan(-1.0, 1.0), f64::INFINITY);
        assert_eq!(lifespan(0.0, 5.0), 5.0);
        assert_eq!(lifespan(0.0, f64::INFINITY), f64::INFINITY);
        assert_relative_eq!(lifespan(1.0, 1.0), 0.5);
    }

    #[test]
    fn transform_with_zero_a_is_identity() {
        let g = Arc::new(RadialGrid::new(1, 15.0, 1024).unwrap());
        let u = soliton(&g);
        let interp = MonotoneCubic::for_field(&u);
        let wave = |t: f64, r: f64| Complex64::new(libm::cos(t), libm::sin(t)) * interp.eval(r);
        let out = transform(wave, 0.0, f64::INFINITY, 0.7, &g).unwrap();
        for (z, r) in out.values().iter().zip(g.nodes()) {
            assert!((z - wave(0.7, *r)).norm() < 1e-14);
        }
    }

    #[test]
    fn transform_of_standing_wave_is_self_similar() {
        let g = Arc::new(RadialGrid::new(1, 15.0, 2048).unwrap());
        let u = soliton(&g);
        let ss = SelfSimilar::new(&u, &quintic(), 1.0).unwrap();
        let interp = MonotoneCubic::for_field(&u);
        let wave = |t: f64, r: f64| Complex64::new(libm::cos(t), libm::sin(t)) * interp.eval(r);
        for t in [0.0, 0.3, 0.75] {
            let a = transform(wave, 1.0, f64::INFINITY, t, &g).unwrap();
            let b = ss.at(t, &g).unwrap();
            let err = a
                .values()
                .iter()
                .zip(b.values())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-12, "t = {t}: {err}");
        }
        assert!(transform(wave, 1.0, f64::INFINITY, 1.0, &g).is_err());
    }

    #[test]
    fn transform_preserves_mass() {
        for (dim, b, cells, times) in [
            (1, 0.5, 4096, [0.1, 0.4, 0.6]),
            (2, 1.0, 16384, [0.1, 0.3, 0.4]),
        ] {
            let g = Arc::new(RadialGrid::new(dim, 15.0, cells).unwrap());
            let p = ModelParams::critical(dim, b).unwrap();
            let gs = solve_ground_state(&p, &g).unwrap();
            let interp = MonotoneCubic::for_field(&gs.profile);
            let wave = |t: f64, r: f64| Complex64::new(libm::cos(t), libm::sin(t)) * interp.eval(r);
            let m0 = functional::mass_sq(&gs.profile);
            for t in times {
                let out = transform(wave, 1.0, f64::INFINITY, t, &g).unwrap();
                assert_relative_eq!(functional::mass_sq(&out), m0, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn inverse_chirp_recovers_field() {
        let g = Arc::new(RadialGrid::new(1, 15.0, 512).unwrap());
        let u = soliton(&g).to_complex();
        let interp_re = MonotoneCubic::for_field(&u.re());
        let forward = transform(
            |_, r| Complex64::new(interp_re.eval(r), 0.0),
            0.8,
            f64::INFINITY,
            0.0,
            &g,
        )
        .unwrap();
        let fi = (
            MonotoneCubic::for_field(&forward.re()),
            MonotoneCubic::for_field(&forward.im()),
        );
        let back = transform(
            |_, r| Complex64::new(fi.0.eval(r), fi.1.eval(r)),
            -0.8,
            f64::INFINITY,
            0.0,
            &g,
        )
        .unwrap();
        for (x, y) in back.values().iter().zip(u.values()) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn self_similar_initial_modulus_is_profile() {
        let g = Arc::new(RadialGrid::new(1, 15.0, 4096).unwrap());
        let u = soliton(&g);
        let phi = self_similar(&u, &quintic(), 1.0, 0.0, &g).unwrap();
        for (z, v) in phi.values().iter().zip(u.values()) {
            assert!((z.norm() - v).abs() < 1e-14);
        }
    }

    #[test]
    fn self_similar_gradient_identity() {
        let g = Arc::new(RadialGrid::new(1, 15.0, 16384).unwrap());
        let u = soliton(&g);
        let p = functional::grad_norm_sq(&u);
        let rr = functional::second_moment(&u);
        for (a, t) in [(1.0, 0.0), (1.0, 0.5), (2.0, 0.2), (1.0, 0.8)] {
            let phi = self_similar(&u, &quintic(), a, t, &g).unwrap();
            let lambda: f64 = 1.0 - a * t;
            let expected = (p + 0.25 * (a * lambda) * (a * lambda) * rr) / (lambda * lambda);
            assert_relative_eq!(
                functional::grad_norm_sq(&phi),
                expected,
                max_relative = 1e-4
            );
            assert_relative_eq!(
                functional::mass_sq(&phi),
                functional::mass_sq(&u),
                max_relative = 1e-6
            );
        }
    }

    #[test]
    fn self_similar_profile_rescales() {
        let g = Arc::new(RadialGrid::new(1, 15.0, 4096).unwrap());
        let u = soliton(&g);
        let ss = SelfSimilar::new(&u, &quintic(), 1.0).unwrap();
        let interp = MonotoneCubic::for_field(&u);
        let lambda: f64 = 1.0 - 0.6;
        for r in [0.01, 0.3, 1.0, 2.5] {
            let lhs = interp.eval(r);
            let rhs = libm::sqrt(lambda) * ss.value(0.6, lambda * r).norm();
            assert!((lhs - rhs).abs() < 1e-6 * lhs.max(1e-3));
        }
    }

    #[test]
    fn self_similar_rejects_non_solutions() {
        let g = Arc::new(RadialGrid::new(1, 15.0, 1024).unwrap());
        let gauss = RealField::from_fn(g.clone(), |r| libm::exp(-r * r)).unwrap();
        assert!(SelfSimilar::new(&gauss, &quintic(), 1.0).is_err());
        assert!(SelfSimilar::new(&RealField::zeros(g.clone()), &quintic(), 1.0).is_err());
        let u = soliton(&g);
        assert!(self_similar(&u, &quintic(), 1.0, 1.0, &g).is_err());
        assert!(self_similar(&u, &quintic(), 0.0, 0.1, &g).is_err());
    }

    #[test]
    fn distances_vanish_quadratically() {
        let g = Arc::new(RadialGrid::new(1, 15.0, 4096).unwrap());
        let u = soliton(&g);
        let zero = initial_distance(&u, 0.0);
        assert_eq!(
            (zero.l2_part, zero.grad_part, zero.h1_total),
            (0.0, 0.0, 0.0)
        );
        let d: Vec<f64> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&a| initial_distance(&u, a).h1_total)
            .collect();
        for pair in d.windows(2) {
            let ratio = pair[1] / pair[0];
            assert!(pair[1] < pair[0]);
            assert!((0.225..=0.275).contains(&ratio), "{ratio}");
        }
    }

    #[test]
    fn chirp_distance_matches_direct_difference() {
        let g = Arc::new(RadialGrid::new(2, 20.0, 2048).unwrap());
        let u = RealField::from_fn(g.clone(), |r| libm::exp(-r * r)).unwrap();
        let a = 0.3;
        let d = initial_distance(&u, a);
        let diff =
            ComplexField::from_fn(g.clone(), |r| (chirp(a, r) - 1.0) * libm::exp(-r * r)).unwrap();
        assert_relative_eq!(d.l2_part, functional::mass_sq(&diff), max_relative = 1e-12);
    }
}

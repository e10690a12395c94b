//! Radial numerics for the focusing nonlinear Schrödinger equation with an
//! inhomogeneous nonlinearity,
//!
//! ```text
//! i ∂t φ + Δφ + |x|^{-b} |φ|^{2σ} φ = 0,   σ = (2 − b)/N,
//! ```
//!
//! restricted to radially symmetric data. The crate is `no_std` (it needs
//! `alloc`) and does no IO; file formats and the command line live in the
//! `icnls` crate.
//!
//! Layout:
//! - [`params`], [`grid`], [`field`], [`functional`], [`interp`]: model
//!   parameters, the staggered radial grid and every integral functional
//!   (mass, gradient, potential term, energy, Weinstein quotient).
//! - [`laplacian`]: the conservative radial Laplacian and a tridiagonal solver
//!   shared by the stationary and time-dependent solvers.
//! - [`shooting`], [`groundstate`]: ground states by shooting plus a Newton
//!   polish, the critical mass and the sharp interpolation constant.
//! - [`evolution`]: Strang split-step propagation with blow-up detection.
//! - [`pseudoconformal`]: the pseudoconformal map and explicit self-similar
//!   blow-up solutions.

#![no_std]
// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod evolution;
pub mod field;
pub mod functional;
pub mod grid;
pub mod groundstate;
pub mod interp;
pub mod laplacian;
pub mod params;
pub mod pseudoconformal;
pub mod regression;
pub mod shooting;

pub use num_complex::Complex64;

pub use error::{Error, Result};

pub use evolution::{
    detect_blowup, estimate_blowup_time, gradient_bound, propagate, step, BlowupFit,
    EvolveControls, GradientBound, Propagator, Sample, TailWarning, Trajectory, Verdict,
};
pub use field::{ComplexField, Field, RealField, Scalar};
pub use grid::RadialGrid;
pub use groundstate::{
    branch, find_ground_state, minimization_report, pohozaev_check, pohozaev_defects, report_from,
    residual, solve_ground_state, verify_interpolation, GroundState, InterpolationCheck,
    MinimizationReport, ShootingOptions,
};
pub use params::ModelParams;
pub use pseudoconformal::{
    initial_distance, lifespan, rate_check, self_similar, transform, InitialDistance, PseudoParams,
    RateReport, SelfSimilar,
};
pub use shooting::{shoot, Shot, ShotClass};

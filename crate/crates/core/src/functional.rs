//! Integral functionals of radial fields.
//!
//! All integrals are over `ℝ^N` and are evaluated with the grid weights; the
//! gradient lives on cell interfaces. Free functions rebuild their weights on
//! each call; [`Functionals`] caches them for repeated evaluation.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{ComplexField, Field, RealField, Scalar};
use crate::grid::RadialGrid;
use crate::interp::MonotoneCubic;
use crate::laplacian::RadialLaplacian;
use crate::params::ModelParams;

/// Cached weights for one grid and one model.
#[derive(Debug, Clone)]
pub struct Functionals {
    pub(crate) laplacian: RadialLaplacian,
    pub(crate) potential_weights: Vec<f64>,
    pub(crate) sigma: f64,
}

impl Functionals {
    pub fn new(grid: &RadialGrid, params: &ModelParams) -> Self {
        Functionals {
            laplacian: RadialLaplacian::new(grid),
            potential_weights: grid.potential_weights(params.b),
            sigma: params.sigma,
        }
    }

    pub fn mass_sq<T: Scalar>(&self, u: &[T]) -> f64 {
        self.laplacian
            .weights()
            .iter()
            .zip(u)
            .map(|(w, v)| w * v.modulus_sq())
            .sum()
    }

    pub fn grad_norm_sq<T: Scalar>(&self, u: &[T]) -> f64 {
        self.laplacian.gradient_norm_sq(u)
    }

    pub fn potential<T: Scalar>(&self, u: &[T]) -> f64 {
        let p = self.sigma + 1.0;
        self.potential_weights
            .iter()
            .zip(u)
            .map(|(q, v)| {
                let m2 = v.modulus_sq();
                if m2 == 0.0 {
                    0.0
                } else {
                    q * libm::pow(m2, p)
                }
            })
            .sum()
    }

    pub fn energy<T: Scalar>(&self, u: &[T]) -> f64 {
        self.grad_norm_sq(u) - self.potential(u) / (self.sigma + 1.0)
    }
}

pub fn mass_sq<T: Scalar>(f: &Field<T>) -> f64 {
    f.grid()
        .weights()
        .iter()
        .zip(f.values())
        .map(|(w, v)| w * v.modulus_sq())
        .sum()
}

/// `‖∇f‖₂²` from differences across interfaces, with `f = 0` at the ghost node.
pub fn grad_norm_sq<T: Scalar>(f: &Field<T>) -> f64 {
    RadialLaplacian::new(f.grid()).gradient_norm_sq(f.values())
}

/// `I(f) = ∫ |x|^{-b} |f|^{2σ+2} dx`.
pub fn potential_i<T: Scalar>(f: &Field<T>, params: &ModelParams) -> f64 {
    let q = f.grid().potential_weights(params.b);
    let p = params.sigma + 1.0;
    q.iter()
        .zip(f.values())
        .map(|(q, v)| {
            let m2 = v.modulus_sq();
            if m2 == 0.0 {
                0.0
            } else {
                q * libm::pow(m2, p)
            }
        })
        .sum()
}

pub fn energy<T: Scalar>(f: &Field<T>, params: &ModelParams) -> f64 {
    grad_norm_sq(f) - potential_i(f, params) / (params.sigma + 1.0)
}

/// Weinstein quotient `‖∇f‖₂² ‖f‖₂^{2σ} / I(f)`.
pub fn weinstein_j<T: Scalar>(f: &Field<T>, params: &ModelParams) -> Result<f64> {
    if f.is_zero() {
        return Err(Error::Domain(
            "Weinstein functional of the zero field".into(),
        ));
    }
    let denom = potential_i(f, params);
    if !(denom > 0.0) {
        return Err(Error::Domain("Weinstein functional with I(f) = 0".into()));
    }
    Ok(grad_norm_sq(f) * libm::pow(mass_sq(f), params.sigma) / denom)
}

/// `‖f − g‖_{H¹}²`.
pub fn h1_distance_sq<T: Scalar>(f: &Field<T>, g: &Field<T>) -> Result<f64> {
    let d = f.sub(g)?;
    Ok(mass_sq(&d) + grad_norm_sq(&d))
}

/// `∫ |x|² |f|² dx`.
pub fn second_moment<T: Scalar>(f: &Field<T>) -> f64 {
    let g = f.grid();
    g.weights()
        .iter()
        .zip(g.nodes())
        .zip(f.values())
        .map(|((w, r), v)| w * r * r * v.modulus_sq())
        .sum()
}

pub fn sup_norm<T: Scalar>(f: &Field<T>) -> f64 {
    f.values().iter().map(|v| v.modulus()).fold(0.0, f64::max)
}

/// Fraction of the mass carried by the outer `fraction` of the grid.
pub fn tail_mass_fraction<T: Scalar>(f: &Field<T>, fraction: f64) -> f64 {
    let total = mass_sq(f);
    if total == 0.0 {
        return 0.0;
    }
    let g = f.grid();
    let start = ((1.0 - fraction) * g.cells() as f64) as usize;
    let tail: f64 = (start..g.cells())
        .map(|j| g.weights()[j] * f.values()[j].modulus_sq())
        .sum();
    tail / total
}

fn rescale_samples(samples: &MonotoneCubic, grid: &RadialGrid, lambda: f64) -> Vec<f64> {
    let amp = libm::pow(lambda, grid.dim() as f64 / 2.0);
    grid.nodes()
        .iter()
        .map(|&r| amp * samples.eval(lambda * r))
        .collect()
}

/// L² scaling `g(r) = λ^{N/2} f(λ r)`, resampled on the same grid.
pub fn l2_scale(f: &RealField, lambda: f64) -> Result<RealField> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain("scaling factor must be positive".into()));
    }
    if lambda == 1.0 {
        return Ok(f.clone());
    }
    let interp = MonotoneCubic::for_field(f);
    let values = rescale_samples(&interp, f.grid(), lambda);
    Ok(Field::from_parts_unchecked(f.grid_arc().clone(), values))
}

/// [`l2_scale`] applied to real and imaginary parts separately.
pub fn l2_scale_complex(f: &ComplexField, lambda: f64) -> Result<ComplexField> {
    let re = l2_scale(&f.re(), lambda)?;
    let im = l2_scale(&f.im(), lambda)?;
    let values = re
        .values()
        .iter()
        .zip(im.values())
        .map(|(&a, &b)| Complex64::new(a, b))
        .collect();
    Ok(Field::from_parts_unchecked(f.grid_arc().clone(), values))
}

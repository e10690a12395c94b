//! Conservative radial Laplacian in flux form and a tridiagonal solver.
//!
//! `(L u)_j = (c_{j+1}(u_{j+1} − u_j) − c_j(u_j − u_{j−1})) / w_j` with flux
//! coefficients `c_k = s ρ_k^{N−1}/Δr`, `c_0 = 0`, and `u_M = 0`. Summation by
//! parts gives `Σ_j w_j ū_j (L u)_j = −Σ_k c_k |u_k − u_{k−1}|²`, i.e. `L` is
//! symmetric and non-positive in the weighted inner product, and its quadratic
//! form is exactly the discrete gradient norm.

use alloc::vec::Vec;
use core::ops::{Add, Div, Mul, Sub};

use crate::field::Scalar;
use crate::grid::RadialGrid;

#[derive(Debug, Clone)]
pub struct RadialLaplacian {
    flux: Vec<f64>,
    weights: Vec<f64>,
}

impl RadialLaplacian {
    pub fn new(grid: &RadialGrid) -> Self {
        RadialLaplacian {
            flux: grid.flux_coefficients(),
            weights: grid.weights().to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn flux(&self) -> &[f64] {
        &self.flux
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `A u` where `A = W L` is the symmetric stiffness matrix.
    pub fn apply_stiffness<T: Scalar>(&self, u: &[T], out: &mut [T]) {
        let m = u.len();
        for j in 0..m {
            let right = if j + 1 < m { u[j + 1] } else { T::zero() };
            let left = if j > 0 { u[j - 1] } else { u[j] };
            out[j] = (right - u[j]) * self.flux[j + 1] - (u[j] - left) * self.flux[j];
        }
    }

    pub fn apply<T: Scalar>(&self, u: &[T]) -> Vec<T> {
        let mut out = alloc::vec![T::zero(); u.len()];
        self.apply_stiffness(u, &mut out);
        for (o, w) in out.iter_mut().zip(&self.weights) {
            *o = *o * (1.0 / w);
        }
        out
    }

    /// Diagonal and off-diagonal of the stiffness matrix `A`.
    /// `off[j]` couples nodes `j` and `j + 1`.
    pub fn stiffness_bands(&self) -> (Vec<f64>, Vec<f64>) {
        let m = self.len();
        let diag = (0..m).map(|j| -(self.flux[j] + self.flux[j + 1])).collect();
        let off = (0..m - 1).map(|j| self.flux[j + 1]).collect();
        (diag, off)
    }

    /// `Σ_k c_k |u_k − u_{k−1}|²` over interfaces `k = 1..=M`.
    pub fn gradient_norm_sq<T: Scalar>(&self, u: &[T]) -> f64 {
        let m = u.len();
        let mut acc = 0.0;
        for k in 1..=m {
            let right = if k < m { u[k] } else { T::zero() };
            acc += self.flux[k] * (right - u[k - 1]).modulus_sq();
        }
        acc
    }
}

/// Thomas algorithm for `lower[j] x[j-1] + diag[j] x[j] + upper[j] x[j+1] = rhs[j]`.
///
/// `lower[0]` and `upper[n-1]` are ignored. Solves in place into `rhs`;
/// `scratch` must have length `n`. No pivoting: callers pass diagonally
/// dominant or well-conditioned systems.
pub fn solve_tridiagonal<T>(lower: &[T], diag: &[T], upper: &[T], rhs: &mut [T], scratch: &mut [T])
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Div<Output = T>,
{
    let n = rhs.len();
    debug_assert!(diag.len() == n && lower.len() == n && upper.len() == n && scratch.len() == n);
    let mut denom = diag[0];
    scratch[0] = upper[0] / denom;
    rhs[0] = rhs[0] / denom;
    for j in 1..n {
        denom = diag[j] - lower[j] * scratch[j - 1];
        scratch[j] = upper[j] / denom;
        rhs[j] = (rhs[j] - lower[j] * rhs[j - 1]) / denom;
    }
    for j in (0..n - 1).rev() {
        rhs[j] = rhs[j] - scratch[j] * rhs[j + 1];
    }
}

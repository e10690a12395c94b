use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};

/// Surface measure of the unit sphere in `ℝ^N`: `2π^{N/2}/Γ(N/2)`.
///
/// For `N = 1` this is 2, the two endpoints of `[-1, 1]`.
pub fn unit_sphere_area(dim: usize) -> f64 {
    let half = dim as f64 / 2.0;
    2.0 * libm::pow(PI, half) / libm::tgamma(half)
}

/// Staggered radial grid on `(0, r_max)`.
///
/// Nodes sit at cell centres `r_j = (j + ½)Δr`, so no node touches the
/// origin. Interfaces sit at `ρ_k = kΔr`, `k = 0..=M`. The field is taken to
/// vanish at a ghost node one cell past the last interface (homogeneous
/// Dirichlet condition).
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    dim: usize,
    r_max: f64,
    dr: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl RadialGrid {
    pub fn new(dim: usize, r_max: f64, cells: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidGrid("dimension must be at least 1".into()));
        }
        if !(r_max > 0.0 && r_max.is_finite()) {
            return Err(Error::InvalidGrid(
                "r_max must be positive and finite".into(),
            ));
        }
        if cells < 2 {
            return Err(Error::InvalidGrid("need at least two cells".into()));
        }
        let dr = r_max / cells as f64;
        let area = unit_sphere_area(dim);
        let nodes: Vec<f64> = (0..cells).map(|j| (j as f64 + 0.5) * dr).collect();
        let n = dim as f64;
        let weights = (0..cells)
            .map(|j| {
                let lo = libm::pow(j as f64 * dr, n);
                let hi = libm::pow((j + 1) as f64 * dr, n);
                area * (hi - lo) / n
            })
            .collect();
        Ok(RadialGrid {
            dim,
            r_max,
            dr,
            nodes,
            weights,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn cells(&self) -> usize {
        self.nodes.len()
    }

    pub fn dr(&self) -> f64 {
        self.dr
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Cell volumes `s (ρ_{j+1}^N − ρ_j^N)/N`. For `N ≤ 2` these coincide with
    /// the midpoint weights `s r_j^{N−1} Δr`; for `N ≥ 3` they keep the
    /// flux-form Laplacian consistent in the cell touching the origin.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn interface(&self, k: usize) -> f64 {
        k as f64 * self.dr
    }

    /// Weights for integrands carrying the factor `r^{-b}`.
    ///
    /// The singular factor is integrated exactly over each cell,
    /// `q_j = s ∫_{ρ_j}^{ρ_{j+1}} r^{N-1-b} dr`, and the rest of the integrand
    /// is sampled at the node. Plain midpoint sampling of `r^{-b}` loses
    /// accuracy like `Δr^{1-b}` when `N - 1 - b < 0`.
    pub fn potential_weights(&self, b: f64) -> Vec<f64> {
        let area = unit_sphere_area(self.dim);
        let e = self.dim as f64 - b;
        (0..self.cells())
            .map(|j| {
                let lo = libm::pow(self.interface(j), e);
                let hi = libm::pow(self.interface(j + 1), e);
                area * (hi - lo) / e
            })
            .collect()
    }

    /// Cell-averaged `r^{-b}`: `q_j / w_j`. Reduces to 1 when `b = 0`.
    pub fn effective_potential(&self, b: f64) -> Vec<f64> {
        self.potential_weights(b)
            .iter()
            .zip(&self.weights)
            .map(|(q, w)| q / w)
            .collect()
    }

    /// Flux coefficients `c_k = s ρ_k^{N-1}/Δr` for interfaces `k = 0..=M`.
    ///
    /// `c_0 = 0`: for `N ≥ 2` the interface area vanishes, for `N = 1` even
    /// symmetry makes the difference across the origin zero.
    pub fn flux_coefficients(&self) -> Vec<f64> {
        let area = unit_sphere_area(self.dim);
        let mut c: Vec<f64> = (0..=self.cells())
            .map(|k| area * libm::pow(self.interface(k), self.dim as f64 - 1.0) / self.dr)
            .collect();
        c[0] = 0.0;
        c
    }

    /// Volume of the ball of radius `r_max` in `ℝ^N`.
    pub fn ball_volume(&self) -> f64 {
        unit_sphere_area(self.dim) * libm::pow(self.r_max, self.dim as f64) / self.dim as f64
    }

    /// Same dimension, extent and cell count.
    pub fn same_as(&self, other: &RadialGrid) -> bool {
        self.dim == other.dim && self.r_max == other.r_max && self.cells() == other.cells()
    }
}

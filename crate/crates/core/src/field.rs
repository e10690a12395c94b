use alloc::sync::Arc;
use alloc::vec::Vec;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::RadialGrid;

/// Scalar type a field can hold: `f64` for stationary profiles,
/// [`Complex64`] for evolving solutions.
pub trait Scalar:
    Copy
    + PartialEq
    + core::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
    + Send
    + Sync
{
    fn zero() -> Self;
    fn from_real(x: f64) -> Self;
    fn modulus_sq(self) -> f64;
    fn is_finite(self) -> bool;
    fn modulus(self) -> f64 {
        libm::sqrt(self.modulus_sq())
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_real(x: f64) -> Self {
        x
    }
    fn modulus_sq(self) -> f64 {
        self * self
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn modulus(self) -> f64 {
        libm::fabs(self)
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn modulus_sq(self) -> f64 {
        self.norm_sqr()
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Samples of a radial profile at the nodes of a [`RadialGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T> {
    grid: Arc<RadialGrid>,
    values: Vec<T>,
}

pub type RealField = Field<f64>;
pub type ComplexField = Field<Complex64>;

impl<T: Scalar> Field<T> {
    pub fn new(grid: Arc<RadialGrid>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.cells() {
            return Err(Error::InvalidGrid(alloc::format!(
                "field has {} samples, grid has {} cells",
                values.len(),
                grid.cells()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("field contains non-finite samples".into()));
        }
        Ok(Field { grid, values })
    }

    pub fn zeros(grid: Arc<RadialGrid>) -> Self {
        let values = alloc::vec![T::zero(); grid.cells()];
        Field { grid, values }
    }

    /// Samples `f(r_j)` at every node.
    pub fn from_fn(grid: Arc<RadialGrid>, f: impl Fn(f64) -> T) -> Result<Self> {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        Self::new(grid, values)
    }

    pub(crate) fn from_parts_unchecked(grid: Arc<RadialGrid>, values: Vec<T>) -> Self {
        debug_assert_eq!(values.len(), grid.cells());
        Field { grid, values }
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn grid_arc(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scaled(&self, c: f64) -> Self {
        let values = self.values.iter().map(|&v| v * c).collect();
        Field {
            grid: self.grid.clone(),
            values,
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| a - b)
            .collect();
        Ok(Field {
            grid: self.grid.clone(),
            values,
        })
    }

    pub fn check_same_grid<U>(&self, other: &Field<U>) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) || self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn modulus(&self) -> RealField {
        let values = self.values.iter().map(|v| v.modulus()).collect();
        Field {
            grid: self.grid.clone(),
            values,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == T::zero())
    }
}

impl RealField {
    pub fn to_complex(&self) -> ComplexField {
        let values = self
            .values
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        Field {
            grid: self.grid.clone(),
            values,
        }
    }
}

impl ComplexField {
    pub fn re(&self) -> RealField {
        let values = self.values.iter().map(|v| v.re).collect();
        Field {
            grid: self.grid.clone(),
            values,
        }
    }

    pub fn im(&self) -> RealField {
        let values = self.values.iter().map(|v| v.im).collect();
        Field {
            grid: self.grid.clone(),
            values,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_must_match_grid() {
        let g = Arc::new(RadialGrid::new(1, 1.0, 4).unwrap());
        assert!(RealField::new(g.clone(), alloc::vec![0.0; 3]).is_err());
        assert!(RealField::new(g, alloc::vec![0.0; 4]).is_ok());
    }

    #[test]
    fn rejects_non_finite() {
        let g = Arc::new(RadialGrid::new(1, 1.0, 2).unwrap());
        assert!(RealField::new(g, alloc::vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn subtraction_needs_matching_grids() {
        let g1 = Arc::new(RadialGrid::new(1, 1.0, 4).unwrap());
        let g2 = Arc::new(RadialGrid::new(1, 2.0, 4).unwrap());
        let a = RealField::zeros(g1.clone());
        let b = RealField::zeros(g2);
        assert_eq!(a.sub(&b), Err(Error::GridMismatch));
        // structurally equal grids are accepted
        let g3 = Arc::new(RadialGrid::new(1, 1.0, 4).unwrap());
        assert!(a.sub(&RealField::zeros(g3)).is_ok());
    }
}

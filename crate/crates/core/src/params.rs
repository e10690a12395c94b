use alloc::format;

use crate::error::{Error, Result};

/// Dimension, inhomogeneity exponent, nonlinearity power and frequency.
///
/// `b = 0` is accepted so the classical equation can serve as a validation
/// case against its closed-form soliton.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub dim: usize,
    pub b: f64,
    pub sigma: f64,
    pub omega: f64,
}

impl ModelParams {
    /// The L²-critical power `(2 − b)/N`.
    pub fn critical_sigma(dim: usize, b: f64) -> f64 {
        (2.0 - b) / dim as f64
    }

    /// Critical-power model with `ω = 1`.
    pub fn critical(dim: usize, b: f64) -> Result<Self> {
        Self::new(dim, b, Self::critical_sigma(dim, b), 1.0)
    }

    pub fn new(dim: usize, b: f64, sigma: f64, omega: f64) -> Result<Self> {
        let params = ModelParams {
            dim,
            b,
            sigma,
            omega,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_omega(self, omega: f64) -> Result<Self> {
        Self::new(self.dim, self.b, self.sigma, omega)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidParams("dimension must be at least 1".into()));
        }
        let n = self.dim as f64;
        let b_max = if n < 2.0 { n } else { 2.0 };
        if !(self.b >= 0.0 && self.b < b_max) {
            return Err(Error::InvalidParams(format!(
                "b = {} outside [0, min(2, N)) = [0, {b_max})",
                self.b
            )));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "sigma = {} must be positive",
                self.sigma
            )));
        }
        if self.dim >= 3 {
            let sigma_max = (2.0 - self.b) / (n - 2.0);
            if self.sigma >= sigma_max {
                return Err(Error::InvalidParams(format!(
                    "sigma = {} not below the energy-critical bound {sigma_max}",
                    self.sigma
                )));
            }
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "omega = {} must be positive",
                self.omega
            )));
        }
        Ok(())
    }

    /// True when `σ = (2 − b)/N` exactly.
    pub fn is_critical(&self) -> bool {
        self.sigma == Self::critical_sigma(self.dim, self.b)
    }

    pub fn require_critical(&self) -> Result<()> {
        if self.is_critical() {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!(
                "operation needs sigma = (2 - b)/N = {}, got {}",
                Self::critical_sigma(self.dim, self.b),
                self.sigma
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_power() {
        let p = ModelParams::critical(2, 1.0).unwrap();
        assert_eq!(p.sigma, 0.5);
        assert!(p.is_critical());
        assert_eq!(ModelParams::critical(1, 0.0).unwrap().sigma, 2.0);
    }

    #[test]
    fn rejects_b_out_of_range() {
        assert!(ModelParams::critical(2, 3.0).is_err());
        assert!(ModelParams::critical(1, 1.0).is_err());
        assert!(ModelParams::critical(3, 2.0).is_err());
        assert!(ModelParams::critical(3, -0.1).is_err());
        assert!(ModelParams::critical(1, 0.99).is_ok());
    }

    #[test]
    fn energy_critical_bound_for_n_ge_3() {
        // (2 - b)/(N - 2) = 1 for N = 3, b = 1
        assert!(ModelParams::new(3, 1.0, 0.99, 1.0).is_ok());
        assert!(ModelParams::new(3, 1.0, 1.0, 1.0).is_err());
        assert!(ModelParams::new(2, 1.0, 50.0, 1.0).is_ok());
        assert!(!ModelParams::new(2, 1.0, 50.0, 1.0).unwrap().is_critical());
    }

    #[test]
    fn omega_must_be_positive() {
        assert!(ModelParams::new(1, 0.0, 2.0, 0.0).is_err());
        assert!(ModelParams::new(1, 0.0, 2.0, f64::NAN).is_err());
    }
}

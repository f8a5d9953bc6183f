use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gevrey radius `a`, Gevrey index `sigma`, Sobolev exponent `s` and viscosity `nu`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GevreyParams {
    pub a: f64,
    pub sigma: f64,
    pub s: f64,
    pub nu: f64,
}

impl Default for GevreyParams {
    fn default() -> Self {
        Self {
            a: 0.1,
            sigma: 1.5,
            s: 1.0,
            nu: 1.0,
        }
    }
}

impl GevreyParams {
    pub fn new(a: f64, sigma: f64, s: f64, nu: f64) -> Result<Self> {
        let p = Self { a, sigma, s, nu };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.a > 0.0) {
            return Err(Error::InvalidParameter(format!("a must be > 0, got {}", self.a)));
        }
        if !(self.sigma.is_finite() && self.sigma >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "sigma must be >= 1, got {}",
                self.sigma
            )));
        }
        if !(self.nu.is_finite() && self.nu > 0.0) {
            return Err(Error::InvalidParameter(format!("nu must be > 0, got {}", self.nu)));
        }
        if !(self.s.is_finite() && self.s >= 0.0) {
            return Err(Error::InvalidParameter(format!("s must be >= 0, got {}", self.s)));
        }
        Ok(())
    }

    /// Operations built on `b = 2a(1/sqrt(sigma) - 1/sigma)` need a strictly
    /// super-analytic index.
    pub fn require_sigma_above_one(&self) -> Result<()> {
        if self.sigma > 1.0 {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "sigma must be > 1 for this operation, got {}",
                self.sigma
            )))
        }
    }

    /// Radius `a / sigma` of the weighted Fourier-L1 functional.
    pub fn l1_radius(&self) -> f64 {
        self.a / self.sigma
    }

    /// `2 sigma_0`: the integer part of `2 sigma`.
    pub fn sigma0_twice(&self) -> u32 {
        (2.0 * self.sigma).floor() as u32
    }
}

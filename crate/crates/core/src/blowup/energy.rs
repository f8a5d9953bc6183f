use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mild::TrajectorySample;

/// Residuals of `‖u(t)‖² + 2ν∫₀ᵗ‖∇u‖² = ‖u⁰‖²`, time integral by the trapezoid rule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyLedger {
    pub times: Vec<f64>,
    /// `‖u(t)‖² + 2ν∫₀ᵗ‖∇u‖² - ‖u⁰‖²`.
    pub residuals: Vec<f64>,
    /// `max |r| / ‖u⁰‖²`, zero for a zero datum.
    pub max_relative: f64,
}

pub fn energy_ledger(samples: &[TrajectorySample], nu: f64) -> Result<EnergyLedger> {
    if samples.len() < 2 {
        return Err(Error::InvalidParameter("energy ledger needs at least 2 samples".into()));
    }
    let e0 = samples[0].norms.l2.powi(2);
    let mut dissipated = 0.0;
    let mut residuals = Vec::with_capacity(samples.len());
    residuals.push(0.0);
    for w in samples.windows(2) {
        let h = w[1].t - w[0].t;
        dissipated += 0.5 * h * (w[0].norms.grad_l2.powi(2) + w[1].norms.grad_l2.powi(2));
        residuals.push(w[1].norms.l2.powi(2) + 2.0 * nu * dissipated - e0);
    }
    let worst = residuals.iter().fold(0.0_f64, |m, r| m.max(r.abs()));
    let max_relative = if e0 > 0.0 { worst / e0 } else { worst };
    Ok(EnergyLedger { times: samples.iter().map(|s| s.t).collect(), residuals, max_relative })
}

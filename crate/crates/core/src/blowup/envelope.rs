use serde::{Deserialize, Serialize};

use super::constants::infimum_b;
use crate::error::{Error, Result};
use crate::lab::m_bound;
use crate::params::GevreyParams;

/// Constants of the exponential lower bound near a finite blow-up time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeParams {
    pub sigma0_twice: u32,
    /// `C₁ = ((ν/2) M(2)^{-2} ‖u⁰‖_{L²})^{2/3}`.
    pub c1_upper: f64,
    /// `C₂ = ((ν/2) M(2)^{-2} ‖u⁰‖²_{L²})^{1/(3σ)}`, as printed.
    pub c2_upper: f64,
    /// `((ν/2) M(2)^{-2} ‖u⁰‖^{-2}_{L²})^{1/(3σ)}`, the value the interpolation step produces.
    pub c2_rederived: f64,
    /// `B C₁ (2aC₂)^{2σ₀+1}`.
    pub c1: f64,
    pub c2: f64,
    pub b: f64,
    pub m2: f64,
}

pub fn envelope_constants(u0_l2: f64, params: &GevreyParams) -> Result<EnvelopeParams> {
    params.validate()?;
    params.require_sigma_above_one()?;
    if !(u0_l2.is_finite() && u0_l2 > 0.0) {
        return Err(Error::InvalidParameter(format!("‖u⁰‖ must be > 0, got {u0_l2}")));
    }
    let m = params.sigma0_twice();
    let m2 = m_bound(2.0)?;
    let base = params.nu / 2.0 * m2.powi(-2);
    let e = 1.0 / (3.0 * params.sigma);
    let c1_upper = (base * u0_l2).powf(2.0 / 3.0);
    let c2_upper = (base * u0_l2 * u0_l2).powf(e);
    let c2_rederived = (base / (u0_l2 * u0_l2)).powf(e);
    let b = infimum_b(m)?;
    let c1 = b * c1_upper * (2.0 * params.a * c2_upper).powi(m as i32 + 1);
    Ok(EnvelopeParams { sigma0_twice: m, c1_upper, c2_upper, c2_rederived, c1, c2: c2_upper, b, m2 })
}

fn gap(t: f64, tstar: f64) -> Result<f64> {
    if !(t >= 0.0 && t < tstar && tstar.is_finite()) {
        return Err(Error::InvalidParameter(format!("need 0 <= t < T*, got t = {t}, T* = {tstar}")));
    }
    Ok(tstar - t)
}

/// `c₁ (T*-t)^{-(2σ₀+1)/(3σ) - 1/3} exp[a c₂ (T*-t)^{-1/(3σ)}]`.
pub fn envelope(t: f64, tstar: f64, ep: &EnvelopeParams, params: &GevreyParams) -> Result<f64> {
    Ok(log_envelope(t, tstar, ep, params)?.exp())
}

pub fn log_envelope(t: f64, tstar: f64, ep: &EnvelopeParams, params: &GevreyParams) -> Result<f64> {
    let d = gap(t, tstar)?;
    let s = params.sigma;
    let p = (ep.sigma0_twice as f64 + 1.0) / (3.0 * s) + 1.0 / 3.0;
    Ok(ep.c1.ln() - p * d.ln() + params.a * ep.c2 * d.powf(-1.0 / (3.0 * s)))
}

/// Lower bound for `‖u(t)‖²_{Ḣ^{1+k/(2σ)}}`: `C₁ (T*-t)^{-2/3} (C₂/(T*-t)^{1/(3σ)})^k`, with the
/// rederived `C₂`.
pub fn k_bound(k: u32, t: f64, tstar: f64, ep: &EnvelopeParams, params: &GevreyParams) -> Result<f64> {
    let d = gap(t, tstar)?;
    let z = ep.c2_rederived * d.powf(-1.0 / (3.0 * params.sigma));
    Ok(ep.c1_upper * d.powf(-2.0 / 3.0) * z.powi(k as i32))
}

/// `Σ_{k>2σ₀} (2a)^k/k! · k_bound(k) = C₁(T*-t)^{-2/3}(e^Z - Σ_{k<=2σ₀} Z^k/k!)`,
/// `Z = 2aC₂(T*-t)^{-1/(3σ)}`: lower bound for `‖u(t)‖²_{Ḣ¹_{a,σ}}`.
pub fn summed_bound(t: f64, tstar: f64, ep: &EnvelopeParams, params: &GevreyParams) -> Result<f64> {
    let d = gap(t, tstar)?;
    let z = 2.0 * params.a * ep.c2_rederived * d.powf(-1.0 / (3.0 * params.sigma));
    let mut partial = 0.0;
    let mut term = 1.0;
    for k in 0..=ep.sigma0_twice {
        if k > 0 {
            term *= z / k as f64;
        }
        partial += term;
    }
    Ok(ep.c1_upper * d.powf(-2.0 / 3.0) * (z.exp() - partial))
}

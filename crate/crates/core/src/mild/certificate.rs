use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::{norm, NormKind};
use crate::params::GevreyParams;
use crate::spectral::SpectralVectorField;

/// Constant in the bilinear smoothing bounds: twice the largest ratio seen by the
/// calibration sweep in `lab::smoothing`.
pub const SMOOTHING_CONSTANT_K: f64 = 0.51;

/// Fixed-point smallness data on a window `[0, T]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallnessCertificate {
    pub t: f64,
    pub k: f64,
    pub c0: f64,
    /// `‖u⁰‖_{H¹_{a,σ}}`, which bounds the heat trajectory on the whole window.
    pub y_norm: f64,
    /// `4 c₀ ‖y‖`.
    pub product: f64,
    pub holds: bool,
}

/// `c₀(T) = K (ν^{-3/4} T^{1/4} + ν^{-1/4} T^{3/4}) (2(e^{2a}+1))^{1/2}`.
pub fn c0(t: f64, params: &GevreyParams, k: f64) -> f64 {
    let nu = params.nu;
    let equiv = (2.0 * ((2.0 * params.a).exp() + 1.0)).sqrt();
    k * (nu.powf(-0.75) * t.powf(0.25) + nu.powf(-0.25) * t.powf(0.75)) * equiv
}

pub fn smallness_certificate_with(
    u0: &SpectralVectorField,
    t: f64,
    params: &GevreyParams,
    k: f64,
) -> Result<SmallnessCertificate> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidParameter(format!("window length must be > 0, got {t}")));
    }
    if !(params.nu > 0.0) {
        return Err(Error::InvalidParameter("the certificate needs ν > 0".into()));
    }
    let c0 = c0(t, params, k);
    let y_norm = norm(u0, NormKind::H1Gevrey, params);
    let product = 4.0 * c0 * y_norm;
    Ok(SmallnessCertificate { t, k, c0, y_norm, product, holds: product < 1.0 })
}

pub fn smallness_certificate(
    u0: &SpectralVectorField,
    t: f64,
    params: &GevreyParams,
) -> Result<SmallnessCertificate> {
    smallness_certificate_with(u0, t, params, SMOOTHING_CONSTANT_K)
}

/// Largest `T` with `4c₀(T)‖y‖ < 1`, by bisection in `log T`. `None` for zero data.
pub fn largest_certified_window(u0: &SpectralVectorField, params: &GevreyParams, k: f64) -> Result<Option<f64>> {
    let y = smallness_certificate_with(u0, 1.0, params, k)?.y_norm;
    if y == 0.0 {
        return Ok(None);
    }
    let holds = |t: f64| 4.0 * c0(t, params, k) * y < 1.0;
    let (mut lo, mut hi) = (1e-30_f64, 1.0_f64);
    while holds(hi) {
        lo = hi;
        hi *= 2.0;
        if hi > 1e30 {
            return Ok(Some(hi));
        }
    }
    if !holds(lo) {
        return Ok(Some(0.0));
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if holds(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo - 1.0 < 1e-13 {
            break;
        }
    }
    Ok(Some(lo))
}

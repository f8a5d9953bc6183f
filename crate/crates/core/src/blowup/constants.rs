use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};

/// Relative agreement required for a closed form to count as matching the quadrature.
pub const CLOSED_FORM_TOL: f64 = 1e-6;

/// `c²_{a,σ} = ∫_{ℝ³} |ξ|^{-2} e^{-b|ξ|^{1/σ}} dξ` with `b = 2a(1/√σ - 1/σ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CASigma {
    pub a: f64,
    pub sigma: f64,
    pub b: f64,
    /// Quadrature value of `c²`.
    pub c_sq: f64,
    /// `4πσ b^{-σ} Γ(σ)`.
    pub c_sq_substitution: f64,
    /// `4πσ b^{σ-2} Γ(σ)`, as printed.
    pub c_sq_printed: f64,
    pub matches_substitution: bool,
    pub matches_printed: bool,
    /// Relative change of the quadrature when the step is halved once more.
    pub step_change: f64,
}

impl CASigma {
    pub fn c(&self) -> f64 {
        self.c_sq.sqrt()
    }
}

/// `4π ∫₀^∞ e^{-b r^{1/σ}} dr` with `r = e^s` and the trapezoid rule on the real line.
fn radial_integral(b: f64, sigma: f64, h: f64) -> f64 {
    // peak of e^{s - b e^{s/σ}} at s* = σ ln(σ/b)
    let s_star = sigma * (sigma / b).ln();
    let f = |s: f64| (s - b * (s / sigma).exp()).exp();
    let lo = s_star - 45.0;
    // right end where b e^{s/σ} - s exceeds 45 past the peak
    let mut hi = s_star + sigma;
    while b * (hi / sigma).exp() - hi < b * (s_star / sigma).exp() - s_star + 45.0 {
        hi += sigma;
    }
    let n = ((hi - lo) / h).ceil() as usize;
    let mut sum = 0.0;
    for i in 0..=n {
        let s = lo + i as f64 * h;
        let w = if i == 0 || i == n { 0.5 } else { 1.0 };
        sum += w * f(s);
    }
    4.0 * PI * sum * h
}

pub fn c_a_sigma(a: f64, sigma: f64) -> Result<CASigma> {
    if !(sigma.is_finite() && sigma > 1.0) {
        return Err(Error::InvalidParameter(format!("c_(a,sigma) needs sigma > 1, got {sigma}")));
    }
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::InvalidParameter(format!("c_(a,sigma) needs a > 0, got {a}")));
    }
    let b = 2.0 * a * (1.0 / sigma.sqrt() - 1.0 / sigma);
    let mut h = 0.25;
    let mut prev = radial_integral(b, sigma, h);
    let (value, step_change) = loop {
        h /= 2.0;
        let next = radial_integral(b, sigma, h);
        let change = ((next - prev) / next).abs();
        if change < 1e-13 || h < 1e-4 {
            break (next, change);
        }
        prev = next;
    };
    let g = gamma(sigma);
    let c_sq_substitution = 4.0 * PI * sigma * b.powf(-sigma) * g;
    let c_sq_printed = 4.0 * PI * sigma * b.powf(sigma - 2.0) * g;
    let rel = |x: f64| ((x - value) / value).abs();
    Ok(CASigma {
        a,
        sigma,
        b,
        c_sq: value,
        c_sq_substitution,
        c_sq_printed,
        matches_substitution: rel(c_sq_substitution) <= CLOSED_FORM_TOL,
        matches_printed: rel(c_sq_printed) <= CLOSED_FORM_TOL,
        step_change,
    })
}

fn check_h_args(z: f64, sigma0_twice: u32) -> Result<()> {
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::InvalidParameter(format!("h(z) needs z > 0, got {z}")));
    }
    if sigma0_twice < 2 {
        return Err(Error::InvalidParameter(format!("2σ₀ must be >= 2, got {sigma0_twice}")));
    }
    Ok(())
}

/// `h(z) = (e^z - Σ_{k<=2σ₀} z^k/k!) / (z^{2σ₀+1} e^{z/2})`.
///
/// Below `z = 2σ₀+1` the numerator is summed as its tail series to avoid cancellation.
pub fn h_function(z: f64, sigma0_twice: u32) -> Result<f64> {
    check_h_args(z, sigma0_twice)?;
    let m = sigma0_twice as f64;
    if z < m + 1.0 {
        // Σ_{j>=0} z^j / (m+1+j)!
        let mut term = (-ln_gamma(m + 2.0)).exp();
        let mut sum = term;
        let mut j = 1.0;
        while term > 1e-18 * sum {
            term *= z / (m + 1.0 + j);
            sum += term;
            j += 1.0;
        }
        Ok(sum * (-z / 2.0).exp())
    } else {
        let mut partial = 0.0;
        let mut term = 1.0;
        for k in 0..=sigma0_twice {
            if k > 0 {
                term *= z / k as f64;
            }
            partial += term;
        }
        // e^{z/2} z^{-(m+1)} (1 - partial e^{-z})
        let log_lead = z / 2.0 - (m + 1.0) * z.ln();
        Ok(log_lead.exp() * (1.0 - partial * (-z).exp()))
    }
}

/// `lim_{z→0⁺} h(z) = 1/(2σ₀+1)!`.
pub fn h_limit_at_zero(sigma0_twice: u32) -> f64 {
    (-ln_gamma(sigma0_twice as f64 + 2.0)).exp()
}

/// `B(σ₀) = inf_{z>0} h(z)`: log-grid bracket on `log z ∈ [-20, 20]`, then golden section.
pub fn infimum_b(sigma0_twice: u32) -> Result<f64> {
    check_h_args(1.0, sigma0_twice)?;
    let hl = |x: f64| h_function(x.exp(), sigma0_twice);
    let n = 4000;
    let xs: Vec<f64> = (0..=n).map(|i| -20.0 + 40.0 * i as f64 / n as f64).collect();
    let mut best = 0;
    let mut best_v = f64::INFINITY;
    for (i, &x) in xs.iter().enumerate() {
        let v = hl(x)?;
        if v < best_v {
            best_v = v;
            best = i;
        }
    }
    let mut lo = xs[best.saturating_sub(1)];
    let mut hi = xs[(best + 1).min(n)];
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (hl(x1)?, hl(x2)?);
    while hi - lo > 1e-12 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = hl(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = hl(x2)?;
        }
    }
    Ok(best_v.min(f1).min(f2))
}

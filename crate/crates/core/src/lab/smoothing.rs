//! Smoothing estimates for the Duhamel operator with constant-in-time arguments.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::verdict::InequalityVerdict;
use crate::error::{Error, Result};
use crate::mild::{duhamel_cumulative, uniform_nodes};
use crate::norms::{norm, NormKind};
use crate::params::GevreyParams;
use crate::spectral::operators::leray_project_in_place;
use crate::spectral::{bilinear_term, random_divergence_free_field, shear_mode, FrequencyGrid, SpectralVectorField};

/// `‖B(u,v)‖_{Ḣ¹_{a,σ}}` and `‖B(u,v)‖_{L²}`, each maximized over the nodes of `[0, T]`.
pub fn smoothing_norms(
    u: &SpectralVectorField,
    v: &SpectralVectorField,
    params: &GevreyParams,
    t: f64,
    nodes: usize,
) -> Result<(f64, f64)> {
    let times = uniform_nodes(t, nodes)?;
    let mut g = bilinear_term(u, v)?;
    g.scale(-1.0);
    let integrand = vec![g; times.len()];
    let mut h1 = 0.0_f64;
    let mut l2 = 0.0_f64;
    for mut b in duhamel_cumulative(&integrand, &times, params.nu)? {
        b.dealias();
        leray_project_in_place(&mut b);
        if !b.is_finite() {
            return Err(Error::NumericalFailure("non-finite Duhamel term".into()));
        }
        h1 = h1.max(norm(&b, NormKind::H1GevreyDot, params));
        l2 = l2.max(norm(&b, NormKind::L2, params));
    }
    Ok((h1, l2))
}

/// Ratios of `B(u,v)` on `[0,T]` against `ν^{-3/4}T^{1/4}` and `ν^{-1/4}T^{3/4}` times
/// `‖u‖_{Ḣ¹_{a,σ}}‖v‖_{Ḣ¹_{a,σ}}`, with constant capped at `cap`.
pub fn check_bilinear_smoothing(
    u: &SpectralVectorField,
    v: &SpectralVectorField,
    params: &GevreyParams,
    t: f64,
    nodes: usize,
    cap: f64,
) -> Result<(InequalityVerdict, InequalityVerdict)> {
    params.validate()?;
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidParameter(format!("T must be > 0, got {t}")));
    }
    if !(params.nu > 0.0) {
        return Err(Error::InvalidParameter("smoothing bounds need ν > 0".into()));
    }
    let (h1, l2) = smoothing_norms(u, v, params, t, nodes)?;
    let uv = norm(u, NormKind::H1GevreyDot, params) * norm(v, NormKind::H1GevreyDot, params);
    let nu = params.nu;
    let unit_h1 = nu.powf(-0.75) * t.powf(0.25) * uv;
    let unit_l2 = nu.powf(-0.25) * t.powf(0.75) * uv;
    let h = InequalityVerdict::with_cap("bilinear_smoothing_h1", h1, unit_h1, cap)
        .with("t", t)
        .with("nu", nu);
    let l = InequalityVerdict::with_cap("bilinear_smoothing_l2", l2, unit_l2, cap)
        .with("t", t)
        .with("nu", nu);
    Ok((h, l))
}

/// Largest smoothing ratio over a randomized sweep of data, viscosities and windows.
pub fn calibrate_smoothing_constant(n: usize, trials: usize, seed: u64) -> Result<f64> {
    let grid = FrequencyGrid::new(n)?;
    let kmax = grid.dealias_cutoff() as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    for _ in 0..trials {
        let a = [0.05, 0.1, 0.5, 1.0][rng.random_range(0..4)];
        let sigma = rng.random_range(1.0..3.0);
        let nu = 10f64.powf(rng.random_range(-1.0..1.0));
        let t = 10f64.powf(rng.random_range(-3.0..1.0));
        let slope = rng.random_range(-3.0..0.0);
        let params = GevreyParams::new(a, sigma, 1.0, nu)?;
        let u = random_divergence_free_field(grid, slope, (1.0, kmax), rng.random())?;
        let v = if rng.random_bool(0.5) {
            u.clone()
        } else {
            random_divergence_free_field(grid, slope, (1.0, kmax), rng.random())?
        };
        let (h, l) = check_bilinear_smoothing(&u, &v, &params, t, 9, f64::INFINITY)?;
        worst = worst
            .max(h.empirical_constant.unwrap_or(0.0))
            .max(l.empirical_constant.unwrap_or(0.0));
    }
    Ok(worst)
}

/// Shear flow plus a broadband perturbation with `|ŵ(ξ)| ∝ |ξ|^{-2}` and `‖w‖ = ε‖shear‖`.
///
/// For small `ε` the quadratic term is dominated by the cross terms and decays like `|ξ|^{-1}`
/// across the resolved band.
pub fn heat_dominated_fixture(grid: FrequencyGrid, eps: f64, seed: u64) -> Result<SpectralVectorField> {
    let kmax = grid.dealias_cutoff() as f64;
    let mut w = random_divergence_free_field(grid, -2.0, (1.0, kmax), seed)?;
    // random directions and phases, deterministic amplitudes
    for idx in 0..grid.len() {
        let c = w.coefficient(idx);
        let m = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if m > 0.0 {
            let s = grid.norm_sq(idx).powf(-1.0) / m;
            w.set_coefficient(idx, c.map(|z| z * s));
        }
    }
    let shear = shear_mode(grid);
    let scale = norm(&shear, NormKind::L2, &GevreyParams::default()) / norm(&w, NormKind::L2, &GevreyParams::default());
    w.scale(eps * scale);
    w.axpy(1.0, &shear)?;
    Ok(w)
}

/// Least-squares slope of `log y` against `log t`.
pub fn log_log_slope(t: &[f64], y: &[f64]) -> f64 {
    let n = t.len() as f64;
    let xs: Vec<f64> = t.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Fitted exponents of `‖B(u,u)‖_{Ḣ¹_{a,σ}}` and `‖B(u,u)‖_{L²}` in `T`.
pub fn smoothing_exponents(
    u: &SpectralVectorField,
    params: &GevreyParams,
    windows: &[f64],
    nodes: usize,
) -> Result<(f64, f64)> {
    let mut h1 = Vec::with_capacity(windows.len());
    let mut l2 = Vec::with_capacity(windows.len());
    for &t in windows {
        let (h, l) = smoothing_norms(u, u, params, t, nodes)?;
        h1.push(h);
        l2.push(l);
    }
    Ok((log_log_slope(windows, &h1), log_log_slope(windows, &l2)))
}

//! The Duhamel term `B(u,v)(t) = -∫₀ᵗ e^{ν(t-τ)Δ} ℙ div(u ⊗ v)(τ) dτ`.
//!
//! The integrand is interpolated linearly in `τ` between nodes and each interval is integrated
//! exactly against the heat kernel, mode by mode.

use rayon::prelude::*;

use super::trajectory::Trajectory;
use crate::error::{Error, Result};
use crate::spectral::operators::{bilinear_term, leray_project_in_place};
use crate::spectral::{FrequencyGrid, SpectralVectorField};

/// `φ₁(z) = (1 - e^{-z})/z`, with `φ₁(0) = 1`.
pub fn phi1(z: f64) -> f64 {
    if z == 0.0 {
        1.0
    } else {
        -(-z).exp_m1() / z
    }
}

/// `φ₂(z) = (1 - e^{-z}(1+z))/z²`, with `φ₂(0) = 1/2`.
pub fn phi2(z: f64) -> f64 {
    if z < 0.5 {
        // Σ_{k>=2} (-1)^k (k-1)/k! z^{k-2}
        let mut term = 0.5;
        let mut sum = 0.5;
        let mut k = 2.0;
        loop {
            // ratio of consecutive terms
            term *= -z * k / ((k + 1.0) * (k - 1.0));
            k += 1.0;
            sum += term;
            if term.abs() <= 1e-18 * sum.abs() || k > 60.0 {
                return sum;
            }
        }
    } else {
        (1.0 - (-z).exp() * (1.0 + z)) / (z * z)
    }
}

/// Per-`|ξ|²` kernel data for one interval of width `h`.
struct IntervalKernel {
    decay: Vec<f64>,
    w1: Vec<f64>,
    w2: Vec<f64>,
}

impl IntervalKernel {
    fn new(grid: FrequencyGrid, nu: f64, h: f64) -> Self {
        let kmax = grid.n() / 2;
        let shells = 3 * kmax * kmax + 1;
        let mut decay = Vec::with_capacity(shells);
        let mut w1 = Vec::with_capacity(shells);
        let mut w2 = Vec::with_capacity(shells);
        for k2 in 0..shells {
            let z = nu * k2 as f64 * h;
            decay.push((-z).exp());
            w1.push(h * phi1(z));
            w2.push(h * phi2(z));
        }
        Self { decay, w1, w2 }
    }
}

fn shell(grid: FrequencyGrid, idx: usize) -> usize {
    grid.norm_sq(idx) as usize
}

/// `acc ← e^{-λh} acc + h[g_b φ₁(λh) - (g_b - g_a) φ₂(λh)]` for every mode.
fn advance(acc: &mut SpectralVectorField, ga: &SpectralVectorField, gb: &SpectralVectorField, k: &IntervalKernel) {
    let grid = acc.grid();
    for c in 0..3 {
        let a = ga.component(c).coeffs();
        let b = gb.component(c).coeffs();
        let out = acc.component_mut(c).coeffs_mut();
        for idx in 0..out.len() {
            let s = shell(grid, idx);
            let (gb, ga) = (b[idx], a[idx]);
            out[idx] = out[idx] * k.decay[s] + gb * k.w1[s] - (gb - ga) * k.w2[s];
        }
    }
}

fn check_nodes(times: &[f64], nu: f64) -> Result<()> {
    if times.len() < 2 || times[0] != 0.0 || times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter(
            "Duhamel nodes must start at 0 and increase strictly".into(),
        ));
    }
    if !(nu.is_finite() && nu >= 0.0) {
        return Err(Error::InvalidParameter(format!("viscosity must be >= 0, got {nu}")));
    }
    Ok(())
}

/// `∫₀^{t_k} e^{ν(t_k-τ)Δ} g(τ) dτ` at every node `t_k`, for a piecewise-linear `g` given by
/// its nodal values.
pub fn duhamel_cumulative(
    integrand: &[SpectralVectorField],
    times: &[f64],
    nu: f64,
) -> Result<Vec<SpectralVectorField>> {
    check_nodes(times, nu)?;
    if integrand.len() != times.len() {
        return Err(Error::InvalidParameter("one integrand value per node required".into()));
    }
    let grid = integrand[0].grid();
    let mut acc = SpectralVectorField::zeros(grid);
    let mut out = Vec::with_capacity(times.len());
    out.push(acc.clone());
    let mut cached: Option<(f64, IntervalKernel)> = None;
    for j in 0..times.len() - 1 {
        let h = times[j + 1] - times[j];
        let reuse = matches!(&cached, Some((hh, _)) if (hh - h).abs() <= 1e-14 * h);
        if !reuse {
            cached = Some((h, IntervalKernel::new(grid, nu, h)));
        }
        let kernel = &cached.as_ref().expect("kernel cached").1;
        advance(&mut acc, &integrand[j], &integrand[j + 1], kernel);
        out.push(acc.clone());
    }
    Ok(out)
}

/// Same integral at an arbitrary `t <= t_last`.
pub fn duhamel_at(
    integrand: &[SpectralVectorField],
    times: &[f64],
    nu: f64,
    t: f64,
) -> Result<SpectralVectorField> {
    check_nodes(times, nu)?;
    if integrand.len() != times.len() {
        return Err(Error::InvalidParameter("one integrand value per node required".into()));
    }
    let last = *times.last().expect("checked");
    if !(t >= 0.0 && t <= last) {
        return Err(Error::InvalidParameter(format!("t = {t} outside [0, {last}]")));
    }
    let j = times.partition_point(|&s| s <= t).saturating_sub(1).min(times.len() - 2);
    let mut acc = if j == 0 {
        SpectralVectorField::zeros(integrand[0].grid())
    } else {
        duhamel_cumulative(&integrand[..=j], &times[..=j], nu)?
            .pop()
            .expect("non-empty")
    };
    let hp = t - times[j];
    if hp > 0.0 {
        let w = hp / (times[j + 1] - times[j]);
        let mut gt = integrand[j].scaled(1.0 - w);
        gt.axpy(w, &integrand[j + 1])?;
        let kernel = IntervalKernel::new(acc.grid(), nu, hp);
        advance(&mut acc, &integrand[j], &gt, &kernel);
    }
    Ok(acc)
}

/// `-ℙ div(u ⊗ v)` at each node, evaluated in parallel.
pub fn nonlinear_integrand(u: &Trajectory, v: &Trajectory) -> Result<Vec<SpectralVectorField>> {
    if u.times != v.times {
        return Err(Error::InvalidParameter("trajectories must share their time nodes".into()));
    }
    u.grid().ensure_same(&v.grid())?;
    u.states
        .par_iter()
        .zip(&v.states)
        .map(|(a, b)| {
            let mut g = bilinear_term(a, b)?;
            g.scale(-1.0);
            Ok(g)
        })
        .collect()
}

fn finish(mut b: SpectralVectorField) -> SpectralVectorField {
    b.dealias();
    leray_project_in_place(&mut b);
    b
}

/// `B(u,v)(t)`.
pub fn duhamel_bilinear(u: &Trajectory, v: &Trajectory, t: f64) -> Result<SpectralVectorField> {
    let g = nonlinear_integrand(u, v)?;
    Ok(finish(duhamel_at(&g, &u.times, u.params.nu, t)?))
}

/// `B(u,v)` at every node.
pub fn duhamel_bilinear_nodes(u: &Trajectory, v: &Trajectory) -> Result<Vec<SpectralVectorField>> {
    let g = nonlinear_integrand(u, v)?;
    Ok(duhamel_cumulative(&g, &u.times, u.params.nu)?
        .into_iter()
        .map(finish)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mild::trajectory::uniform_nodes;
    use crate::params::GevreyParams;
    use crate::spectral::{taylor_green_3d, SpectralField};
    use num_complex::Complex64;

    #[test]
    fn phi_functions() {
        for z in [0.0_f64, 1e-8, 1e-3, 0.1, 0.49, 0.5, 0.51, 2.0, 30.0, 800.0] {
            let p1 = if z == 0.0 { 1.0 } else { (1.0 - (-z).exp()) / z };
            assert!((phi1(z) - p1).abs() <= 1e-12 * p1.max(1e-300) || z < 1e-6);
            // Simpson oracle: φ₂(z) = ∫₀¹ s e^{-z s} ds
            let n = 200_000;
            let f = |s: f64| s * (-z * s).exp();
            let q: f64 = (0..=n)
                .map(|i| {
                    let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                    w * f(i as f64 / n as f64)
                })
                .sum::<f64>()
                / (3.0 * n as f64);
            assert!((phi2(z) - q).abs() <= 1e-8 * q.max(1e-300), "z = {z}");
        }
        assert!((phi2(0.5 - 1e-12) - phi2(0.5)).abs() < 1e-12);
    }

    fn single_mode(g: FrequencyGrid, c: f64) -> SpectralVectorField {
        let mut u = SpectralVectorField::zeros(g);
        *u.component_mut(2) = SpectralField::real_mode(g, [1, 1, 0], Complex64::new(c, 0.0)).unwrap();
        u
    }

    #[test]
    fn constant_integrand_closed_form() {
        let g = FrequencyGrid::new(8).unwrap();
        let nu = 0.7;
        let f = single_mode(g, 1.3);
        let times = uniform_nodes(0.9, 7).unwrap();
        let integrand = vec![f.clone(); times.len()];
        let out = duhamel_cumulative(&integrand, &times, nu).unwrap();
        for (t, b) in times.iter().zip(&out) {
            let lam = nu * 2.0;
            let exact = 1.3 * (1.0 - (-lam * t).exp()) / lam;
            let got = b.component(2).get([1, 1, 0]).re;
            assert!((got - exact).abs() <= 1e-12 * exact.max(1e-300) + 1e-300, "t = {t}");
        }
        let mid = duhamel_at(&integrand, &times, nu, 0.4).unwrap();
        let exact = 1.3 * (1.0 - (-1.4f64 * 0.4).exp()) / 1.4;
        assert!((mid.component(2).get([1, 1, 0]).re - exact).abs() < 1e-12);
    }

    #[test]
    fn zero_viscosity_is_trapezoid() {
        let g = FrequencyGrid::new(8).unwrap();
        let times: Vec<f64> = vec![0.0, 0.1, 0.35, 0.4, 1.0];
        let integrand: Vec<_> = times.iter().map(|&t| single_mode(g, (3.0 * t).sin() + 1.0)).collect();
        let out = duhamel_cumulative(&integrand, &times, 0.0).unwrap();
        let mut trap = 0.0;
        for j in 1..times.len() {
            let h = times[j] - times[j - 1];
            trap += 0.5 * h * ((3.0 * times[j]).sin() + 1.0 + (3.0 * times[j - 1]).sin() + 1.0);
            let got = out[j].component(2).get([1, 1, 0]).re;
            assert!((got - trap).abs() <= 1e-8 * trap);
        }
    }

    #[test]
    fn linear_integrand_is_exact() {
        // g(τ) = τ: ∫₀ᵗ e^{-λ(t-τ)} τ dτ = t/λ - (1 - e^{-λt})/λ²
        let g = FrequencyGrid::new(8).unwrap();
        let (nu, lam) = (0.5, 1.0_f64);
        let times = vec![0.0, 0.3, 1.1, 2.0];
        let integrand: Vec<_> = times.iter().map(|&t| single_mode(g, t)).collect();
        let b = duhamel_at(&integrand, &times, nu, 1.7).unwrap();
        let t: f64 = 1.7;
        let exact = t / lam - (1.0 - (-lam * t).exp()) / (lam * lam);
        assert!((b.component(2).get([1, 1, 0]).re - exact).abs() < 1e-13);
    }

    #[test]
    fn vanishing_second_argument() {
        let g = FrequencyGrid::new(8).unwrap();
        let p = GevreyParams::default();
        let times = uniform_nodes(0.5, 5).unwrap();
        let u = Trajectory::constant(&taylor_green_3d(g), times.clone(), p).unwrap();
        let z = Trajectory::constant(&SpectralVectorField::zeros(g), times, p).unwrap();
        assert_eq!(duhamel_bilinear(&u, &z, 0.5).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn taylor_green_against_refined_time_quadrature() {
        let g = FrequencyGrid::new(8).unwrap();
        let p = GevreyParams::new(0.1, 1.5, 1.0, 0.8).unwrap();
        let u0 = taylor_green_3d(g);
        let t_end = 0.6;
        let times = uniform_nodes(t_end, 9).unwrap();
        let u = Trajectory::constant(&u0, times, p).unwrap();
        let b = duhamel_bilinear(&u, &u, t_end).unwrap();

        // composite Simpson on 10x the nodes, heat kernel applied directly
        let n = 80;
        let mut nl = bilinear_term(&u0, &u0).unwrap();
        nl.scale(-1.0);
        let mut acc = SpectralVectorField::zeros(g);
        for i in 0..=n {
            let tau = t_end * i as f64 / n as f64;
            let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            let k = crate::spectral::heat_propagate_vector(&nl, p.nu, t_end - tau).unwrap();
            acc.axpy(w * t_end / (3.0 * n as f64), &k).unwrap();
        }
        let d = b.difference(&acc).unwrap();
        assert!(b.max_abs() > 1e-3);
        assert!(d.max_abs() <= 1e-6 * b.max_abs());
    }
}

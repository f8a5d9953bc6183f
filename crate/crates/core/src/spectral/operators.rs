//! Fourier-side differential operators, the Leray projector, the heat semigroup and the
//! quadratic terms of the Navier-Stokes equations.

use num_complex::Complex64;

use super::fft::{to_physical, to_spectral};
use super::field::{SpectralField, SpectralVectorField};
use super::grid::FrequencyGrid;
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Leray projection `f̂ - (f̂·ξ) ξ / |ξ|^2`; the mean mode is annihilated.
pub fn leray_project(f: &SpectralVectorField) -> SpectralVectorField {
    let mut out = f.clone();
    leray_project_in_place(&mut out);
    out
}

pub fn leray_project_in_place(f: &mut SpectralVectorField) {
    let grid = f.grid();
    f.set_coefficient(0, [Complex64::new(0.0, 0.0); 3]);
    for idx in 1..grid.len() {
        let k = grid.wavevector(idx);
        let kf = [k[0] as f64, k[1] as f64, k[2] as f64];
        let u = f.coefficient(idx);
        let dot = u[0] * kf[0] + u[1] * kf[1] + u[2] * kf[2];
        if dot == Complex64::new(0.0, 0.0) {
            continue;
        }
        let c = dot / grid.norm_sq(idx);
        f.set_coefficient(idx, [u[0] - c * kf[0], u[1] - c * kf[1], u[2] - c * kf[2]]);
    }
}

/// Heat semigroup `e^{νtΔ}`: multiplies each coefficient by `e^{-νt|ξ|^2}`.
pub fn heat_propagate(f: &SpectralField, nu: f64, t: f64) -> Result<SpectralField> {
    check_time(t)?;
    let grid = f.grid();
    let mut out = f.clone();
    for (idx, c) in out.coeffs_mut().iter_mut().enumerate() {
        *c *= (-nu * t * grid.norm_sq(idx)).exp();
    }
    Ok(out)
}

pub fn heat_propagate_vector(
    f: &SpectralVectorField,
    nu: f64,
    t: f64,
) -> Result<SpectralVectorField> {
    let [a, b, c] = f.components();
    SpectralVectorField::from_components([
        heat_propagate(a, nu, t)?,
        heat_propagate(b, nu, t)?,
        heat_propagate(c, nu, t)?,
    ])
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("time must be >= 0, got {t}")))
    }
}

/// `∇f`, coefficientwise `iξ f̂`.
pub fn gradient(f: &SpectralField) -> SpectralVectorField {
    let grid = f.grid();
    let mut out = SpectralVectorField::zeros(grid);
    for (idx, c) in f.coeffs().iter().enumerate() {
        let k = grid.wavevector(idx);
        out.set_coefficient(
            idx,
            [I * k[0] as f64 * c, I * k[1] as f64 * c, I * k[2] as f64 * c],
        );
    }
    out
}

/// `div f`, coefficientwise `iξ·f̂`.
pub fn divergence(f: &SpectralVectorField) -> SpectralField {
    let grid = f.grid();
    let mut out = SpectralField::zeros(grid);
    for (idx, c) in out.coeffs_mut().iter_mut().enumerate() {
        let k = grid.wavevector(idx);
        let u = f.coefficient(idx);
        *c = I * (u[0] * k[0] as f64 + u[1] * k[1] as f64 + u[2] * k[2] as f64);
    }
    out
}

/// `Δf`, coefficientwise `-|ξ|^2 f̂`.
pub fn laplacian(f: &SpectralField) -> SpectralField {
    let grid = f.grid();
    let mut out = f.clone();
    for (idx, c) in out.coeffs_mut().iter_mut().enumerate() {
        *c *= -grid.norm_sq(idx);
    }
    out
}

/// Which differential operator [`differential`] applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DifferentialKind {
    Gradient,
    Divergence,
    Laplacian,
}

/// Result of [`differential`]: the rank depends on the operator.
#[derive(Clone, Debug, PartialEq)]
pub enum DifferentialOutput {
    Scalar(SpectralField),
    Vector(SpectralVectorField),
}

/// Input of [`differential`].
pub enum DifferentialInput<'a> {
    Scalar(&'a SpectralField),
    Vector(&'a SpectralVectorField),
}

/// Dispatching form of [`gradient`], [`divergence`] and [`laplacian`]; the Laplacian of a
/// vector field acts componentwise.
pub fn differential(f: DifferentialInput<'_>, kind: DifferentialKind) -> Result<DifferentialOutput> {
    match (f, kind) {
        (DifferentialInput::Scalar(s), DifferentialKind::Gradient) => {
            Ok(DifferentialOutput::Vector(gradient(s)))
        }
        (DifferentialInput::Scalar(s), DifferentialKind::Laplacian) => {
            Ok(DifferentialOutput::Scalar(laplacian(s)))
        }
        (DifferentialInput::Vector(v), DifferentialKind::Divergence) => {
            Ok(DifferentialOutput::Scalar(divergence(v)))
        }
        (DifferentialInput::Vector(v), DifferentialKind::Laplacian) => {
            let [a, b, c] = v.components();
            Ok(DifferentialOutput::Vector(SpectralVectorField::from_components([
                laplacian(a),
                laplacian(b),
                laplacian(c),
            ])?))
        }
        (DifferentialInput::Scalar(_), DifferentialKind::Divergence) => Err(
            Error::InvalidParameter("divergence needs a vector field".into()),
        ),
        (DifferentialInput::Vector(_), DifferentialKind::Gradient) => Err(
            Error::InvalidParameter("gradient needs a scalar field".into()),
        ),
    }
}

/// Pointwise product on the collocation grid of `f`, without padding.
///
/// Exact on modes kept by the 2/3 rule when both inputs are dealiased.
pub fn pseudo_product(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    f.grid().ensure_same(&g.grid())?;
    let pf = to_physical(f);
    let pg = to_physical(g);
    let prod: Vec<Complex64> = pf.iter().zip(&pg).map(|(a, b)| a * b).collect();
    Ok(to_spectral(f.grid(), prod))
}

/// Lattice convolution `ĥ(ξ) = Σ_η f̂(ξ-η) ĝ(η)` computed through a zero-padded transform.
///
/// Products whose frequency leaves the lattice are dropped, matching [`convolve_oracle`].
pub fn transform_product(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    f.grid().ensure_same(&g.grid())?;
    let big = f.grid().doubled();
    let h = pseudo_product(&f.resample(big), &g.resample(big))?;
    Ok(h.resample(f.grid()))
}

/// Brute-force lattice convolution, the reference for every transform-based product.
///
/// Runs over the nonzero coefficients of both inputs, so the cost is at most `O(N^6)`.
pub fn convolve_oracle(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    f.grid().ensure_same(&g.grid())?;
    let grid = f.grid();
    let mut out = SpectralField::zeros(grid);
    let sf: Vec<(usize, [i64; 3])> = f
        .support()
        .into_iter()
        .map(|i| (i, grid.wavevector(i)))
        .collect();
    let sg: Vec<(usize, [i64; 3])> = g
        .support()
        .into_iter()
        .map(|i| (i, grid.wavevector(i)))
        .collect();
    let (lo, hi) = (grid.min_wavenumber(), grid.max_wavenumber());
    let n = grid.n();
    let h = out.coeffs_mut();
    for &(i, p) in &sf {
        let a = f.coeffs()[i];
        for &(j, q) in &sg {
            let k = [p[0] + q[0], p[1] + q[1], p[2] + q[2]];
            if k.iter().any(|&c| c < lo || c > hi) {
                continue;
            }
            let pos = |c: i64| if c >= 0 { c as usize } else { (c + n as i64) as usize };
            let idx = (pos(k[0]) * n + pos(k[1])) * n + pos(k[2]);
            h[idx] += a * g.coeffs()[j];
        }
    }
    Ok(out)
}

/// `div(u ⊗ v)` with `(u ⊗ v)` having rows `v_i u`, i.e. component `i` is `Σ_j ∂_j(v_i u_j)`,
/// evaluated pseudo-spectrally and truncated to the 2/3-rule mask.
pub fn div_tensor(u: &SpectralVectorField, v: &SpectralVectorField) -> Result<SpectralVectorField> {
    let grid = u.grid();
    grid.ensure_same(&v.grid())?;
    let pu: Vec<Vec<Complex64>> = u.components().iter().map(to_physical).collect();
    let same = std::ptr::eq(u, v) || u == v;
    let pv: Vec<Vec<Complex64>> = if same {
        pu.clone()
    } else {
        v.components().iter().map(to_physical).collect()
    };
    // products[i][j] = (v_i u_j)^
    let mut products: Vec<Vec<Option<SpectralField>>> = vec![vec![None, None, None]; 3];
    for i in 0..3 {
        for j in 0..3 {
            if same && j < i {
                continue;
            }
            let prod: Vec<Complex64> = pv[i].iter().zip(&pu[j]).map(|(a, b)| a * b).collect();
            products[i][j] = Some(to_spectral(grid, prod));
        }
    }
    let mut out = SpectralVectorField::zeros(grid);
    for idx in 0..grid.len() {
        if !grid.is_retained(idx) {
            continue;
        }
        let k = grid.wavevector(idx);
        let mut acc = [Complex64::new(0.0, 0.0); 3];
        for (i, slot) in acc.iter_mut().enumerate() {
            for (j, kj) in k.iter().enumerate() {
                let p = if same && j < i {
                    products[j][i].as_ref()
                } else {
                    products[i][j].as_ref()
                }
                .expect("product computed");
                *slot += I * (*kj as f64) * p.coeffs()[idx];
            }
        }
        out.set_coefficient(idx, acc);
    }
    if !out.is_finite() {
        return Err(Error::NumericalFailure(
            "non-finite value in quadratic term".into(),
        ));
    }
    Ok(out)
}

/// `ℙ div(u ⊗ v)`, dealiased and re-projected.
pub fn bilinear_term(u: &SpectralVectorField, v: &SpectralVectorField) -> Result<SpectralVectorField> {
    let mut out = div_tensor(u, v)?;
    leray_project_in_place(&mut out);
    Ok(out)
}

/// `ℙ div(u ⊗ u)`, the quadratic term of the Navier-Stokes equations.
pub fn nonlinear_term(u: &SpectralVectorField) -> Result<SpectralVectorField> {
    bilinear_term(u, u)
}

/// Same quantity as [`bilinear_term`] assembled from [`convolve_oracle`] products.
pub fn bilinear_term_oracle(
    u: &SpectralVectorField,
    v: &SpectralVectorField,
) -> Result<SpectralVectorField> {
    let grid = u.grid();
    let mut out = SpectralVectorField::zeros(grid);
    for i in 0..3 {
        let mut acc = SpectralField::zeros(grid);
        for j in 0..3 {
            let p = convolve_oracle(v.component(i), u.component(j))?;
            for (idx, c) in acc.coeffs_mut().iter_mut().enumerate() {
                let k = grid.wavevector(idx);
                *c += I * (k[j] as f64) * p.coeffs()[idx];
            }
        }
        acc.dealias();
        *out.component_mut(i) = acc;
    }
    leray_project_in_place(&mut out);
    Ok(out)
}

/// Quadrature-free `L^2` inner product of physical samples, `(2π)^{-3} ∫ f conj(g)`.
pub fn physical_mean_product(f: &SpectralField, g: &SpectralField) -> Result<f64> {
    f.grid().ensure_same(&g.grid())?;
    let pf = to_physical(f);
    let pg = to_physical(g);
    let n = pf.len() as f64;
    Ok(pf.iter().zip(&pg).map(|(a, b)| (a * b.conj()).re).sum::<f64>() / n)
}

/// Grid shared by two fields, or a mismatch error.
pub fn common_grid(a: FrequencyGrid, b: FrequencyGrid) -> Result<FrequencyGrid> {
    a.ensure_same(&b)?;
    Ok(a)
}

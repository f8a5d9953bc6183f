//! Closed-form velocity fields used as test fixtures.

use num_complex::Complex64;

use super::field::{SpectralField, SpectralVectorField};
use super::grid::FrequencyGrid;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn put(f: &mut SpectralField, xi: [i64; 3], v: Complex64) {
    f.set(xi, v).expect("fixture modes lie on every admissible grid");
}

/// Shear mode `u = (0, 0, 2cos x₁)`, a steady state of the Euler part.
pub fn shear_mode(grid: FrequencyGrid) -> SpectralVectorField {
    let mut u = SpectralVectorField::zeros(grid);
    put(u.component_mut(2), [1, 0, 0], c(1.0, 0.0));
    put(u.component_mut(2), [-1, 0, 0], c(1.0, 0.0));
    u
}

/// Two-dimensional Taylor-Green vortex `(sin x₁ cos x₂, -cos x₁ sin x₂, 0)`.
///
/// Its nonlinearity is a pure gradient, so under Navier-Stokes it decays as `e^{-2νt}`.
pub fn taylor_green(grid: FrequencyGrid) -> SpectralVectorField {
    let mut u = SpectralVectorField::zeros(grid);
    // sin x₁ cos x₂ = (1/4i) Σ sign(k₁) e^{i(k₁x₁+k₂x₂)}, k ∈ {±1}²
    for k1 in [-1i64, 1] {
        for k2 in [-1i64, 1] {
            let s1 = k1 as f64;
            let s2 = k2 as f64;
            put(u.component_mut(0), [k1, k2, 0], c(0.0, -0.25 * s1));
            put(u.component_mut(1), [k1, k2, 0], c(0.0, 0.25 * s2));
        }
    }
    u
}

/// Three-dimensional Taylor-Green vortex
/// `(sin x₁ cos x₂ cos x₃, -cos x₁ sin x₂ cos x₃, 0)`, genuinely nonlinear.
pub fn taylor_green_3d(grid: FrequencyGrid) -> SpectralVectorField {
    let mut u = SpectralVectorField::zeros(grid);
    for k1 in [-1i64, 1] {
        for k2 in [-1i64, 1] {
            for k3 in [-1i64, 1] {
                let s1 = k1 as f64;
                let s2 = k2 as f64;
                put(u.component_mut(0), [k1, k2, k3], c(0.0, -0.125 * s1));
                put(u.component_mut(1), [k1, k2, k3], c(0.0, 0.125 * s2));
            }
        }
    }
    u
}

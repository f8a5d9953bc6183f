use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::FrequencyGrid;
use crate::error::{Error, Result};

/// Relative divergence tolerance `|ξ·û(ξ)| <= tol · |ξ| |û(ξ)|`.
pub const DIVERGENCE_TOL: f64 = 1e-10;

/// Fourier coefficients of a real scalar field, `f(x) = Σ_ξ f̂(ξ) e^{iξ·x}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralField {
    grid: FrequencyGrid,
    coeffs: Vec<Complex64>,
}

/// Per-mode access shared by scalar and vector fields.
pub trait Coefficients {
    fn grid(&self) -> FrequencyGrid;

    /// `|f̂(ξ)|^2`, summed over components for vector fields.
    fn mode_sq(&self, idx: usize) -> f64;

    /// Euclidean magnitude of the coefficient (triple).
    fn mode_abs(&self, idx: usize) -> f64 {
        self.mode_sq(idx).sqrt()
    }

    /// `Re Σ_c f̂_c(ξ) conj(ĝ_c(ξ))`.
    fn mode_dot(&self, other: &Self, idx: usize) -> f64;
}

impl SpectralField {
    pub fn zeros(grid: FrequencyGrid) -> Self {
        Self {
            grid,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_coeffs(grid: FrequencyGrid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::InvalidField(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                coeffs.len()
            )));
        }
        Ok(Self { grid, coeffs })
    }

    pub fn from_fn(grid: FrequencyGrid, mut f: impl FnMut([i64; 3]) -> Complex64) -> Self {
        let coeffs = (0..grid.len()).map(|i| f(grid.wavevector(i))).collect();
        Self { grid, coeffs }
    }

    /// Single real Fourier pair: `c` at `ξ` and `conj(c)` at `-ξ`.
    pub fn real_mode(grid: FrequencyGrid, xi: [i64; 3], c: Complex64) -> Result<Self> {
        let mut f = Self::zeros(grid);
        let i = grid
            .index(xi)
            .ok_or_else(|| Error::InvalidField(format!("{xi:?} not on the lattice")))?;
        let j = grid
            .index([-xi[0], -xi[1], -xi[2]])
            .ok_or_else(|| Error::InvalidField(format!("-{xi:?} not on the lattice")))?;
        if i == j {
            f.coeffs[i] = Complex64::new(c.re, 0.0);
        } else {
            f.coeffs[i] = c;
            f.coeffs[j] = c.conj();
        }
        Ok(f)
    }

    pub fn grid(&self) -> FrequencyGrid {
        self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn get(&self, xi: [i64; 3]) -> Complex64 {
        self.grid
            .index(xi)
            .map(|i| self.coeffs[i])
            .unwrap_or_default()
    }

    pub fn set(&mut self, xi: [i64; 3], c: Complex64) -> Result<()> {
        let i = self
            .grid
            .index(xi)
            .ok_or_else(|| Error::InvalidField(format!("{xi:?} not on the lattice")))?;
        self.coeffs[i] = c;
        Ok(())
    }

    pub fn mean(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Largest `|f̂(-ξ) - conj(f̂(ξ))|` relative to the largest coefficient.
    ///
    /// Modes whose partner `-ξ` is off the lattice must vanish.
    pub fn hermitian_defect(&self) -> f64 {
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        let mut worst: f64 = 0.0;
        for i in 0..self.coeffs.len() {
            let d = match self.grid.conjugate_index(i) {
                Some(j) => (self.coeffs[j] - self.coeffs[i].conj()).norm(),
                None => self.coeffs[i].norm(),
            };
            worst = worst.max(d);
        }
        worst / scale
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    /// Replace the field with its Hermitian part `(f̂(ξ) + conj(f̂(-ξ)))/2`.
    pub fn symmetrize(&mut self) {
        let old = self.coeffs.clone();
        for (i, c) in self.coeffs.iter_mut().enumerate() {
            *c = match self.grid.conjugate_index(i) {
                Some(j) => 0.5 * (old[i] + old[j].conj()),
                None => Complex64::new(0.0, 0.0),
            };
        }
    }

    /// Zero every mode outside the 2/3-rule mask.
    pub fn dealias(&mut self) {
        let grid = self.grid;
        for (i, c) in self.coeffs.iter_mut().enumerate() {
            if !grid.is_retained(i) {
                *c = Complex64::new(0.0, 0.0);
            }
        }
    }

    pub fn is_dealiased(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| self.grid.is_retained(i) || *c == Complex64::new(0.0, 0.0))
    }

    /// Copy onto another grid, dropping modes that do not fit.
    pub fn resample(&self, grid: FrequencyGrid) -> Self {
        let mut out = Self::zeros(grid);
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c == Complex64::new(0.0, 0.0) {
                continue;
            }
            if let Some(j) = grid.index(self.grid.wavevector(i)) {
                out.coeffs[j] = *c;
            }
        }
        out
    }

    pub fn scale(&mut self, s: f64) {
        self.coeffs.iter_mut().for_each(|c| *c *= s);
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.scale(s);
        out
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: f64, other: &Self) -> Result<()> {
        self.grid.ensure_same(&other.grid)?;
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += s * b;
        }
        Ok(())
    }

    /// Indices of nonzero coefficients.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
            .map(|(i, _)| i)
            .collect()
    }
}

impl Coefficients for SpectralField {
    fn grid(&self) -> FrequencyGrid {
        self.grid
    }

    #[inline]
    fn mode_sq(&self, idx: usize) -> f64 {
        self.coeffs[idx].norm_sqr()
    }

    #[inline]
    fn mode_dot(&self, other: &Self, idx: usize) -> f64 {
        (self.coeffs[idx] * other.coeffs[idx].conj()).re
    }
}

/// Three-component field; for velocities it is kept mean-free and divergence-free.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralVectorField {
    components: [SpectralField; 3],
}

impl SpectralVectorField {
    pub fn zeros(grid: FrequencyGrid) -> Self {
        Self {
            components: [
                SpectralField::zeros(grid),
                SpectralField::zeros(grid),
                SpectralField::zeros(grid),
            ],
        }
    }

    pub fn from_components(components: [SpectralField; 3]) -> Result<Self> {
        let g = components[0].grid();
        components[1].grid().ensure_same(&g)?;
        components[2].grid().ensure_same(&g)?;
        Ok(Self { components })
    }

    pub fn grid(&self) -> FrequencyGrid {
        self.components[0].grid()
    }

    pub fn components(&self) -> &[SpectralField; 3] {
        &self.components
    }

    pub fn components_mut(&mut self) -> &mut [SpectralField; 3] {
        &mut self.components
    }

    pub fn component(&self, c: usize) -> &SpectralField {
        &self.components[c]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut SpectralField {
        &mut self.components[c]
    }

    pub fn into_components(self) -> [SpectralField; 3] {
        self.components
    }

    pub fn coefficient(&self, idx: usize) -> [Complex64; 3] {
        [
            self.components[0].coeffs()[idx],
            self.components[1].coeffs()[idx],
            self.components[2].coeffs()[idx],
        ]
    }

    pub fn set_coefficient(&mut self, idx: usize, v: [Complex64; 3]) {
        for (c, x) in self.components.iter_mut().zip(v) {
            c.coeffs_mut()[idx] = x;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().map(|c| c.max_abs()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(|c| c.is_finite())
    }

    pub fn hermitian_defect(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.hermitian_defect())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    pub fn symmetrize(&mut self) {
        self.components.iter_mut().for_each(|c| c.symmetrize());
    }

    pub fn dealias(&mut self) {
        self.components.iter_mut().for_each(|c| c.dealias());
    }

    pub fn is_dealiased(&self) -> bool {
        self.components.iter().all(|c| c.is_dealiased())
    }

    /// Largest `|ξ·û(ξ)| / (|ξ| |û(ξ)|)` over nonzero modes.
    pub fn divergence_defect(&self) -> f64 {
        let grid = self.grid();
        let mut worst: f64 = 0.0;
        for idx in 1..grid.len() {
            let u = self.coefficient(idx);
            let mag = self.mode_abs(idx);
            if mag == 0.0 {
                continue;
            }
            let k = grid.wavevector(idx);
            let dot = u[0] * k[0] as f64 + u[1] * k[1] as f64 + u[2] * k[2] as f64;
            worst = worst.max(dot.norm() / (grid.norm_sq(idx).sqrt() * mag));
        }
        worst
    }

    pub fn is_divergence_free(&self) -> bool {
        self.divergence_defect() <= DIVERGENCE_TOL
    }

    pub fn mean(&self) -> [Complex64; 3] {
        self.coefficient(0)
    }

    /// Checks every velocity invariant: finite, Hermitian, mean-free, divergence-free.
    pub fn validate_velocity(&self) -> Result<()> {
        if !self.is_finite() {
            return Err(Error::InvalidField("non-finite coefficient".into()));
        }
        let h = self.hermitian_defect();
        if h > 1e-12 {
            return Err(Error::InvalidField(format!(
                "not Hermitian (defect {h:e})"
            )));
        }
        if self.mean().iter().any(|c| c.norm() > 1e-14 * self.max_abs().max(1.0)) {
            return Err(Error::InvalidField("nonzero mean mode".into()));
        }
        let d = self.divergence_defect();
        if d > DIVERGENCE_TOL {
            return Err(Error::InvalidField(format!(
                "not divergence-free (defect {d:e})"
            )));
        }
        Ok(())
    }

    pub fn resample(&self, grid: FrequencyGrid) -> Self {
        Self {
            components: [
                self.components[0].resample(grid),
                self.components[1].resample(grid),
                self.components[2].resample(grid),
            ],
        }
    }

    pub fn scale(&mut self, s: f64) {
        self.components.iter_mut().for_each(|c| c.scale(s));
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.scale(s);
        out
    }

    pub fn axpy(&mut self, s: f64, other: &Self) -> Result<()> {
        for (a, b) in self.components.iter_mut().zip(&other.components) {
            a.axpy(s, b)?;
        }
        Ok(())
    }

    /// `self - other`.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.axpy(-1.0, other)?;
        Ok(out)
    }
}

impl Coefficients for SpectralVectorField {
    fn grid(&self) -> FrequencyGrid {
        self.components[0].grid()
    }

    #[inline]
    fn mode_sq(&self, idx: usize) -> f64 {
        self.components.iter().map(|c| c.coeffs()[idx].norm_sqr()).sum()
    }

    #[inline]
    fn mode_dot(&self, other: &Self, idx: usize) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.mode_dot(b, idx))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> FrequencyGrid {
        FrequencyGrid::new(n).unwrap()
    }

    #[test]
    fn real_mode_is_hermitian() {
        let f = SpectralField::real_mode(grid(8), [1, -2, 0], Complex64::new(0.3, -0.7)).unwrap();
        assert!(f.is_hermitian(0.0));
        assert_eq!(f.get([-1, 2, 0]), Complex64::new(0.3, 0.7));
    }

    #[test]
    fn nyquist_mode_breaks_hermitian_pairing() {
        let mut f = SpectralField::zeros(grid(4));
        f.set([-2, 0, 0], Complex64::new(1.0, 0.0)).unwrap();
        assert!(!f.is_hermitian(1e-12));
        f.symmetrize();
        assert_eq!(f.max_abs(), 0.0);
    }

    #[test]
    fn divergence_defect_detects_compressive_mode() {
        let g = grid(8);
        let mut u = SpectralVectorField::zeros(g);
        // u_1 = 2 cos x_1 is a pure compression.
        *u.component_mut(0) = SpectralField::real_mode(g, [1, 0, 0], Complex64::new(1.0, 0.0)).unwrap();
        assert!((u.divergence_defect() - 1.0).abs() < 1e-15);
        assert!(u.validate_velocity().is_err());
        let mut w = SpectralVectorField::zeros(g);
        *w.component_mut(2) = SpectralField::real_mode(g, [1, 0, 0], Complex64::new(1.0, 0.0)).unwrap();
        assert!(w.validate_velocity().is_ok());
    }

    #[test]
    fn resample_roundtrip_keeps_low_modes() {
        let g = grid(8);
        let f = SpectralField::real_mode(g, [2, 1, -3], Complex64::new(1.0, 2.0)).unwrap();
        let up = f.resample(g.doubled());
        assert_eq!(up.resample(g), f);
    }
}

//! Three-dimensional complex FFT on the periodic box, built from `rustfft` line transforms.
//!
//! With the convention `f(x) = Σ_ξ f̂(ξ) e^{iξ·x}` sampled at `x_j = 2πj/N`, synthesis is the
//! unnormalized inverse DFT and analysis is the forward DFT divided by `N^3`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::field::SpectralField;
use super::grid::FrequencyGrid;

pub struct Fft3 {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Fft3 {
    fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    /// Cached plan for a grid.
    pub fn for_grid(grid: FrequencyGrid) -> Arc<Fft3> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Fft3>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = cache.lock().expect("fft plan cache poisoned");
        map.entry(grid.n())
            .or_insert_with(|| Arc::new(Fft3::new(grid.n())))
            .clone()
    }

    fn transform(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        assert_eq!(data.len(), n * n * n);
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        // axis 2 is contiguous
        plan.process_with_scratch(data, &mut scratch);

        let mut tmp = vec![Complex64::new(0.0, 0.0); data.len()];
        // axis 1: gather lines as (i0, i2, i1)
        for i0 in 0..n {
            for i1 in 0..n {
                for i2 in 0..n {
                    tmp[(i0 * n + i2) * n + i1] = data[(i0 * n + i1) * n + i2];
                }
            }
        }
        plan.process_with_scratch(&mut tmp, &mut scratch);
        for i0 in 0..n {
            for i1 in 0..n {
                for i2 in 0..n {
                    data[(i0 * n + i1) * n + i2] = tmp[(i0 * n + i2) * n + i1];
                }
            }
        }
        // axis 0: gather lines as (i1, i2, i0)
        for i0 in 0..n {
            for i1 in 0..n {
                for i2 in 0..n {
                    tmp[(i1 * n + i2) * n + i0] = data[(i0 * n + i1) * n + i2];
                }
            }
        }
        plan.process_with_scratch(&mut tmp, &mut scratch);
        for i0 in 0..n {
            for i1 in 0..n {
                for i2 in 0..n {
                    data[(i0 * n + i1) * n + i2] = tmp[(i1 * n + i2) * n + i0];
                }
            }
        }
    }

    /// Physical samples `f(x_j)` from Fourier coefficients.
    pub fn synthesize(&self, f: &SpectralField) -> Vec<Complex64> {
        let mut data = f.coeffs().to_vec();
        self.transform(&mut data, &self.inverse);
        data
    }

    /// Fourier coefficients from physical samples.
    pub fn analyze(&self, mut data: Vec<Complex64>) -> SpectralField {
        self.transform(&mut data, &self.forward);
        let norm = 1.0 / (self.n * self.n * self.n) as f64;
        data.iter_mut().for_each(|c| *c *= norm);
        let grid = FrequencyGrid::new(self.n).expect("plan built from a valid grid");
        SpectralField::from_coeffs(grid, data).expect("length matches grid")
    }
}

/// Physical samples of `f` on the `N^3` collocation grid.
pub fn to_physical(f: &SpectralField) -> Vec<Complex64> {
    Fft3::for_grid(f.grid()).synthesize(f)
}

/// Fourier coefficients of physical samples on `grid`.
pub fn to_spectral(grid: FrequencyGrid, data: Vec<Complex64>) -> SpectralField {
    Fft3::for_grid(grid).analyze(data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn single_mode_synthesis() {
        let g = FrequencyGrid::new(8).unwrap();
        let f = SpectralField::real_mode(g, [1, 0, 0], Complex64::new(1.0, 0.0)).unwrap();
        let phys = to_physical(&f);
        for j0 in 0..8 {
            let x = 2.0 * PI * j0 as f64 / 8.0;
            let v = phys[(j0 * 8 + 3) * 8 + 5];
            assert!((v.re - 2.0 * x.cos()).abs() < 1e-14);
            assert!(v.im.abs() < 1e-14);
        }
    }

    #[test]
    fn axis_ordering() {
        let g = FrequencyGrid::new(6).unwrap();
        let mut f = SpectralField::zeros(g);
        f.set([0, 0, 1], Complex64::new(1.0, 0.0)).unwrap();
        let phys = to_physical(&f);
        // depends on x_3 only
        for (idx, v) in phys.iter().enumerate() {
            let j2 = idx % 6;
            let x3 = 2.0 * PI * j2 as f64 / 6.0;
            assert!((v - Complex64::new(x3.cos(), x3.sin())).norm() < 1e-14);
        }
    }
}

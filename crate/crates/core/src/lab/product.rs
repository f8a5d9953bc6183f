//! Exact products of band-limited fields, used as inequality left-hand sides.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::operators::{convolve_oracle, pseudo_product};
use crate::spectral::SpectralField;

/// Largest grid accepted by the brute-force product.
pub const ORACLE_MAX_N: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductMethod {
    Oracle,
    Transform,
}

/// The full product `fg` of two fields on an `N` grid, returned on the doubled grid which
/// holds every frequency `ξ + η`.
///
/// The transform route multiplies collocation values on the `2N` grid directly: input
/// frequencies lie in `[-N/2, N/2-1]`, so sums stay inside `[-N, N-1]` and nothing wraps.
pub fn exact_product(f: &SpectralField, g: &SpectralField, method: ProductMethod) -> Result<SpectralField> {
    let grid = f.grid();
    grid.ensure_same(&g.grid())?;
    let big = grid.doubled();
    let (fb, gb) = (f.resample(big), g.resample(big));
    match method {
        ProductMethod::Oracle => {
            if grid.n() > ORACLE_MAX_N {
                return Err(Error::InvalidGrid(format!(
                    "oracle product limited to N <= {ORACLE_MAX_N}, got N = {}; use the transform product",
                    grid.n()
                )));
            }
            convolve_oracle(&fb, &gb)
        }
        ProductMethod::Transform => pseudo_product(&fb, &gb),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{random_scalar_field, FrequencyGrid};

    #[test]
    fn methods_agree_including_edge_modes() {
        let g = FrequencyGrid::new(8).unwrap();
        // full-lattice data, corners included
        let f = SpectralField::from_fn(g, |k| {
            num_complex::Complex64::new((k[0] + 2 * k[1]) as f64 * 0.1, (k[2] - k[0]) as f64 * 0.07)
        });
        let h = random_scalar_field(g, -1.0, (1.0, 2.5), 3).unwrap();
        let a = exact_product(&f, &h, ProductMethod::Oracle).unwrap();
        let b = exact_product(&f, &h, ProductMethod::Transform).unwrap();
        let scale = a.max_abs();
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            assert!((x - y).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn oracle_refuses_large_grids() {
        let g = FrequencyGrid::new(32).unwrap();
        let f = SpectralField::zeros(g);
        assert!(exact_product(&f, &f, ProductMethod::Oracle).is_err());
        assert!(exact_product(&f, &f, ProductMethod::Transform).is_ok());
    }
}

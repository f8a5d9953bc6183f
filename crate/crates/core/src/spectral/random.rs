//! Seeded random fields for tests, sweeps and calibration.
//!
//! Coefficients are drawn in a canonical wavevector order over the cube
//! `[-ceil(kmax), ceil(kmax)]^3`, so a seed produces the same field on every grid that holds
//! the band.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::field::{SpectralField, SpectralVectorField};
use super::grid::FrequencyGrid;
use super::operators::leray_project_in_place;
use crate::error::{Error, Result};

fn check_band(grid: FrequencyGrid, band: (f64, f64)) -> Result<()> {
    let (lo, hi) = band;
    let limit = grid.n() as f64 / 3.0;
    if !(lo.is_finite() && hi.is_finite()) || lo < 1.0 || hi < lo || hi > limit {
        return Err(Error::InvalidParameter(format!(
            "band [{lo}, {hi}] must satisfy 1 <= kmin <= kmax <= N/3 = {limit:.4}"
        )));
    }
    Ok(())
}

fn draw(
    grid: FrequencyGrid,
    ncomp: usize,
    slope: f64,
    band: (f64, f64),
    seed: u64,
) -> Result<Vec<SpectralField>> {
    check_band(grid, band)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kmax = band.1.ceil() as i64;
    let mut comps = vec![SpectralField::zeros(grid); ncomp];
    let mut hit = false;
    for k0 in -kmax..=kmax {
        for k1 in -kmax..=kmax {
            for k2 in -kmax..=kmax {
                let mut z = [Complex64::new(0.0, 0.0); 3];
                for slot in z.iter_mut().take(ncomp) {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    *slot = Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2;
                }
                let xi = [k0, k1, k2];
                let r = ((k0 * k0 + k1 * k1 + k2 * k2) as f64).sqrt();
                if r < band.0 || r > band.1 {
                    continue;
                }
                let Some(idx) = grid.index(xi) else { continue };
                if !grid.is_retained(idx) {
                    continue;
                }
                hit = true;
                let amp = r.powf(slope);
                for (c, field) in comps.iter_mut().enumerate() {
                    field.coeffs_mut()[idx] = z[c] * amp;
                }
            }
        }
    }
    if !hit {
        return Err(Error::InvalidParameter(format!(
            "band [{}, {}] holds no retained lattice point",
            band.0, band.1
        )));
    }
    for f in comps.iter_mut() {
        f.symmetrize();
        f.coeffs_mut()[0] = Complex64::new(0.0, 0.0);
    }
    Ok(comps)
}

/// Random real, mean-free, divergence-free velocity with `|û(ξ)| ~ |ξ|^slope` on the shell
/// `kmin <= |ξ| <= kmax`.
pub fn random_divergence_free_field(
    grid: FrequencyGrid,
    spectrum_slope: f64,
    band: (f64, f64),
    seed: u64,
) -> Result<SpectralVectorField> {
    let comps = draw(grid, 3, spectrum_slope, band, seed)?;
    let [a, b, c]: [SpectralField; 3] = comps.try_into().expect("three components");
    let mut u = SpectralVectorField::from_components([a, b, c])?;
    leray_project_in_place(&mut u);
    if u.max_abs() == 0.0 {
        return Err(Error::InvalidParameter(
            "band supports no divergence-free mode".into(),
        ));
    }
    Ok(u)
}

/// Random real mean-free scalar field with the same band and envelope conventions.
pub fn random_scalar_field(
    grid: FrequencyGrid,
    spectrum_slope: f64,
    band: (f64, f64),
    seed: u64,
) -> Result<SpectralField> {
    Ok(draw(grid, 1, spectrum_slope, band, seed)?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn support_stays_in_band() {
        let g = FrequencyGrid::new(8).unwrap();
        let u = random_divergence_free_field(g, -1.0, (1.0, 2.0), 1).unwrap();
        assert!(u.max_abs() > 0.0);
        for c in u.components() {
            for idx in c.support() {
                let r = g.norm_sq(idx).sqrt();
                assert!((1.0..=2.0).contains(&r), "mode {:?}", g.wavevector(idx));
            }
        }
        assert!(u.validate_velocity().is_ok());
    }

    #[test]
    fn deterministic_and_grid_independent() {
        let g8 = FrequencyGrid::new(8).unwrap();
        let g16 = FrequencyGrid::new(16).unwrap();
        let a = random_divergence_free_field(g8, -1.0, (1.0, 2.0), 42).unwrap();
        let b = random_divergence_free_field(g8, -1.0, (1.0, 2.0), 42).unwrap();
        assert_eq!(a, b);
        let c = random_divergence_free_field(g16, -1.0, (1.0, 2.0), 42).unwrap();
        assert_eq!(a.resample(g16), c);
        let d = random_divergence_free_field(g8, -1.0, (1.0, 2.0), 43).unwrap();
        assert_ne!(a, d);
    }

    #[test]
    fn rejects_bad_bands() {
        let g = FrequencyGrid::new(8).unwrap();
        assert!(random_divergence_free_field(g, 0.0, (0.5, 2.0), 0).is_err());
        assert!(random_divergence_free_field(g, 0.0, (2.0, 1.0), 0).is_err());
        assert!(random_divergence_free_field(g, 0.0, (1.0, 3.0), 0).is_err());
        assert!(random_divergence_free_field(g, 0.0, (1.1, 1.3), 0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn always_a_valid_velocity(seed in any::<u64>(), slope in -3.0f64..1.0) {
            let g = FrequencyGrid::new(8).unwrap();
            let u = random_divergence_free_field(g, slope, (1.0, 2.5), seed).unwrap();
            prop_assert!(u.validate_velocity().is_ok());
            prop_assert!(u.is_dealiased());
        }
    }
}

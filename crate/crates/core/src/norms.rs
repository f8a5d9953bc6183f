//! Sobolev, homogeneous Sobolev and Sobolev-Gevrey norms on the frequency lattice, and the
//! weighted Fourier-`L¹` functional.
//!
//! All norms are lattice sums with unit Parseval weight:
//! `‖f‖²_{Ḣˢ} = Σ_{ξ≠0} |ξ|^{2s} |f̂(ξ)|²`, `‖f‖²_{Hˢ} = Σ (1+|ξ|²)ˢ |f̂(ξ)|²`, and the Gevrey
//! versions insert `e^{2a|ξ|^{1/σ}}`. Vector fields sum the component squares.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::GevreyParams;
use crate::spectral::{to_physical, Coefficients, FrequencyGrid, SpectralField, SpectralVectorField};

/// Which norm [`norm`] evaluates. `Hs*` kinds use `params.s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    L2,
    H1Dot,
    HsDot,
    Hs,
    H1GevreyDot,
    H1Gevrey,
    HsGevreyDot,
    HsGevrey,
}

impl NormKind {
    pub const ALL: [NormKind; 8] = [
        NormKind::L2,
        NormKind::H1Dot,
        NormKind::HsDot,
        NormKind::Hs,
        NormKind::H1GevreyDot,
        NormKind::H1Gevrey,
        NormKind::HsGevreyDot,
        NormKind::HsGevrey,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            NormKind::L2 => "l2",
            NormKind::H1Dot => "h1_dot",
            NormKind::HsDot => "hs_dot",
            NormKind::Hs => "hs",
            NormKind::H1GevreyDot => "h1_gevrey_dot",
            NormKind::H1Gevrey => "h1_gevrey",
            NormKind::HsGevreyDot => "hs_gevrey_dot",
            NormKind::HsGevrey => "hs_gevrey",
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        matches!(
            self,
            NormKind::H1Dot | NormKind::HsDot | NormKind::H1GevreyDot | NormKind::HsGevreyDot
        )
    }

    /// Squared multiplier at `|ξ|² = k2`.
    #[inline]
    pub fn weight_sq(&self, k2: f64, params: &GevreyParams) -> f64 {
        if self.is_homogeneous() && k2 == 0.0 {
            return 0.0;
        }
        let gev = |w: f64| w * gevrey_weight_radial(k2.sqrt(), params.a, params.sigma).powi(2);
        match self {
            NormKind::L2 => 1.0,
            NormKind::H1Dot => k2,
            NormKind::HsDot => k2.powf(params.s),
            NormKind::Hs => (1.0 + k2).powf(params.s),
            NormKind::H1GevreyDot => gev(k2),
            NormKind::H1Gevrey => gev(1.0 + k2),
            NormKind::HsGevreyDot => gev(k2.powf(params.s)),
            NormKind::HsGevrey => gev((1.0 + k2).powf(params.s)),
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NormKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownNormKind(s.to_string()))
    }
}

/// `e^{a|ξ|^{1/σ}}`.
pub fn gevrey_weight(xi: [i64; 3], a: f64, sigma: f64) -> f64 {
    let r = ((xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]) as f64).sqrt();
    gevrey_weight_radial(r, a, sigma)
}

#[inline]
pub fn gevrey_weight_radial(r: f64, a: f64, sigma: f64) -> f64 {
    if r == 0.0 {
        1.0
    } else {
        (a * r.powf(1.0 / sigma)).exp()
    }
}

pub fn norm_sq<F: Coefficients>(f: &F, kind: NormKind, params: &GevreyParams) -> f64 {
    let grid = f.grid();
    (0..grid.len())
        .map(|idx| {
            let m = f.mode_sq(idx);
            if m == 0.0 {
                0.0
            } else {
                kind.weight_sq(grid.norm_sq(idx), params) * m
            }
        })
        .sum()
}

pub fn norm<F: Coefficients>(f: &F, kind: NormKind, params: &GevreyParams) -> f64 {
    norm_sq(f, kind, params).sqrt()
}

/// Real inner product whose diagonal is [`norm_sq`].
pub fn inner_product<F: Coefficients>(
    f: &F,
    g: &F,
    kind: NormKind,
    params: &GevreyParams,
) -> Result<f64> {
    let grid = f.grid();
    grid.ensure_same(&g.grid())?;
    Ok((0..grid.len())
        .map(|idx| {
            let d = f.mode_dot(g, idx);
            if d == 0.0 {
                0.0
            } else {
                kind.weight_sq(grid.norm_sq(idx), params) * d
            }
        })
        .sum())
}

/// `Σ_ξ e^{r|ξ|^{1/σ}} |f̂(ξ)|`, the `ξ = 0` term included.
pub fn fourier_l1_weighted<F: Coefficients>(f: &F, radius: f64, sigma: f64) -> f64 {
    let grid = f.grid();
    (0..grid.len())
        .map(|idx| {
            let m = f.mode_abs(idx);
            if m == 0.0 {
                0.0
            } else {
                gevrey_weight_radial(grid.norm_sq(idx).sqrt(), radius, sigma) * m
            }
        })
        .sum()
}

/// Root mean square of the physical samples, `((2π)^{-3} ∫ |f|²)^{1/2}`.
pub fn physical_rms(f: &SpectralField) -> f64 {
    let p = to_physical(f);
    (p.iter().map(|z| z.norm_sqr()).sum::<f64>() / p.len() as f64).sqrt()
}

/// `(∫_{[0,2π)³} |f|²)^{1/2}` by the collocation rule; equals `(2π)^{3/2}` times [`norm`] with
/// [`NormKind::L2`].
pub fn box_l2_norm(f: &SpectralField) -> f64 {
    physical_rms(f) * (2.0 * std::f64::consts::PI).powf(1.5)
}

/// `‖∇u‖_{L²}` from physical samples of all nine derivatives.
pub fn physical_grad_l2(u: &SpectralVectorField) -> f64 {
    let mut total = 0.0;
    for c in u.components() {
        let g = crate::spectral::gradient(c);
        for d in g.components() {
            total += physical_rms(d).powi(2);
        }
    }
    total.sqrt()
}

/// Every norm of one velocity at one time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub l2: f64,
    pub h1_dot: f64,
    pub hs_dot: f64,
    pub h1_gevrey_dot: f64,
    pub h1_gevrey: f64,
    /// Radius `a/σ`.
    pub fourier_l1_weighted: f64,
    /// Radius 0.
    pub fourier_l1: f64,
    pub grad_l2: f64,
}

impl NormReport {
    pub const COLUMNS: [&'static str; 8] = [
        "l2",
        "h1_dot",
        "hs_dot",
        "h1_gevrey_dot",
        "h1_gevrey",
        "fourier_l1_weighted",
        "fourier_l1",
        "grad_l2",
    ];

    pub fn of(u: &SpectralVectorField, params: &GevreyParams) -> Self {
        Self::of_field(u, params, physical_grad_l2(u))
    }

    /// Same as [`NormReport::of`] but `grad_l2` taken from the lattice sum, skipping transforms.
    pub fn of_spectral(u: &SpectralVectorField, params: &GevreyParams) -> Self {
        Self::of_field(u, params, norm(u, NormKind::H1Dot, params))
    }

    fn of_field(u: &SpectralVectorField, params: &GevreyParams, grad_l2: f64) -> Self {
        let grid: FrequencyGrid = u.grid();
        let mut acc = [0.0f64; 7];
        let inv_sigma = 1.0 / params.sigma;
        for idx in 0..grid.len() {
            let m = u.mode_sq(idx);
            if m == 0.0 {
                continue;
            }
            let k2 = grid.norm_sq(idx);
            let r = k2.sqrt();
            let abs = m.sqrt();
            let rp = if r == 0.0 { 0.0 } else { r.powf(inv_sigma) };
            let e2 = (2.0 * params.a * rp).exp();
            acc[0] += m;
            acc[5] += (params.a * inv_sigma * rp).exp() * abs;
            acc[6] += abs;
            acc[4] += (1.0 + k2) * e2 * m;
            if k2 > 0.0 {
                acc[1] += k2 * m;
                acc[2] += k2.powf(params.s) * m;
                acc[3] += k2 * e2 * m;
            }
        }
        Self {
            l2: acc[0].sqrt(),
            h1_dot: acc[1].sqrt(),
            hs_dot: acc[2].sqrt(),
            h1_gevrey_dot: acc[3].sqrt(),
            h1_gevrey: acc[4].sqrt(),
            fourier_l1_weighted: acc[5],
            fourier_l1: acc[6],
            grad_l2,
        }
    }

    pub fn values(&self) -> [f64; 8] {
        [
            self.l2,
            self.h1_dot,
            self.hs_dot,
            self.h1_gevrey_dot,
            self.h1_gevrey,
            self.fourier_l1_weighted,
            self.fourier_l1,
            self.grad_l2,
        ]
    }

    pub fn csv_header() -> String {
        Self::COLUMNS.join(",")
    }

    pub fn csv_row(&self) -> String {
        self.values()
            .iter()
            .map(|v| format!("{v:e}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn is_finite(&self) -> bool {
        self.values().iter().all(|v| v.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{random_divergence_free_field, shear_mode};
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn params(a: f64, sigma: f64) -> GevreyParams {
        GevreyParams::new(a, sigma, 1.0, 1.0).unwrap()
    }

    #[test]
    fn weights() {
        assert_eq!(gevrey_weight([0, 0, 0], 0.7, 1.5), 1.0);
        for sigma in [1.0, 1.5, 3.0] {
            assert!((gevrey_weight([0, 1, 0], 0.3, sigma) - 0.3f64.exp()).abs() < 1e-15);
        }
        let direct = (1.0f64 * 4f64.powf(0.5)).exp();
        assert!((gevrey_weight([0, 0, 4], 1.0, 2.0) - direct).abs() < 1e-12);
        assert!((gevrey_weight([0, 0, 4], 1.0, 2.0) - 2f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn shear_mode_norms() {
        let g = FrequencyGrid::new(8).unwrap();
        let u = shear_mode(g);
        let p = params(0.3, 1.5);
        assert!((norm_sq(&u, NormKind::L2, &p) - 2.0).abs() < 1e-14);
        assert!((norm_sq(&u, NormKind::H1Dot, &p) - 2.0).abs() < 1e-14);
        assert!((norm_sq(&u, NormKind::H1GevreyDot, &p) - 2.0 * 0.6f64.exp()).abs() < 1e-13);
        assert!((fourier_l1_weighted(&u, 0.3 / 1.5, 1.5) - 2.0 * 0.2f64.exp()).abs() < 1e-14);
        let r = NormReport::of(&u, &p);
        assert!((r.fourier_l1_weighted - 2.0 * 0.2f64.exp()).abs() < 1e-14);
        assert!((r.fourier_l1 - 2.0).abs() < 1e-14);
        assert!((r.grad_l2 - r.h1_dot).abs() < 1e-13);
    }

    #[test]
    fn zero_field_is_zero_everywhere() {
        let g = FrequencyGrid::new(8).unwrap();
        let u = SpectralVectorField::zeros(g);
        let p = params(1.0, 2.0);
        for k in NormKind::ALL {
            assert_eq!(norm(&u, k, &p), 0.0);
        }
        assert!(NormReport::of(&u, &p).values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn unknown_kind_rejected() {
        assert!("h7_magic".parse::<NormKind>().is_err());
        for k in NormKind::ALL {
            assert_eq!(k.name().parse::<NormKind>().unwrap(), k);
        }
    }

    #[test]
    fn report_matches_individual_norms() {
        let g = FrequencyGrid::new(16).unwrap();
        let u = random_divergence_free_field(g, -1.0, (1.0, 5.0), 4).unwrap();
        let p = GevreyParams::new(0.4, 1.7, 1.5, 0.5).unwrap();
        let r = NormReport::of(&u, &p);
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs().max(1e-300);
        assert!(close(r.l2, norm(&u, NormKind::L2, &p)));
        assert!(close(r.h1_dot, norm(&u, NormKind::H1Dot, &p)));
        assert!(close(r.hs_dot, norm(&u, NormKind::HsDot, &p)));
        assert!(close(r.h1_gevrey_dot, norm(&u, NormKind::H1GevreyDot, &p)));
        assert!(close(r.h1_gevrey, norm(&u, NormKind::H1Gevrey, &p)));
        assert!(close(r.fourier_l1_weighted, fourier_l1_weighted(&u, p.l1_radius(), p.sigma)));
        assert!((r.grad_l2 - r.h1_dot).abs() <= 1e-12 * r.h1_dot);
        assert!(r.h1_gevrey >= r.h1_gevrey_dot);
        let json = serde_json::to_value(r).unwrap();
        for col in NormReport::COLUMNS {
            assert!(json.get(col).is_some());
        }
        assert_eq!(r.csv_row().split(',').count(), NormReport::COLUMNS.len());
    }

    #[test]
    fn parseval_single_modes() {
        let g = FrequencyGrid::new(8).unwrap();
        for xi in [[1, 0, 0], [1, 2, -1], [0, 0, 3]] {
            let f = SpectralField::real_mode(g, xi, Complex64::new(0.6, -0.8)).unwrap();
            let lattice = norm(&f, NormKind::L2, &GevreyParams::default());
            assert!((lattice - 2f64.sqrt()).abs() < 1e-14);
            assert!((physical_rms(&f) - lattice).abs() < 1e-13);
            let boxed = lattice * (2.0 * std::f64::consts::PI).powf(1.5);
            assert!((box_l2_norm(&f) - boxed).abs() < 1e-12 * boxed);
        }
    }

    #[test]
    fn inner_product_consistency() {
        let g = FrequencyGrid::new(8).unwrap();
        let p = params(0.5, 1.5);
        let mut rng_seed = 0u64;
        for kind in NormKind::ALL {
            for _ in 0..5 {
                rng_seed += 1;
                let f = random_divergence_free_field(g, -1.0, (1.0, 2.5), rng_seed).unwrap();
                let h = random_divergence_free_field(g, -0.5, (1.0, 2.5), rng_seed + 1000).unwrap();
                let ff = inner_product(&f, &f, kind, &p).unwrap();
                let n2 = norm_sq(&f, kind, &p);
                assert!((ff - n2).abs() <= 1e-12 * n2);
                let fh = inner_product(&f, &h, kind, &p).unwrap();
                let hf = inner_product(&h, &f, kind, &p).unwrap();
                assert!((fh - hf).abs() <= 1e-12 * fh.abs().max(1e-300));
                assert!(fh.abs() <= norm(&f, kind, &p) * norm(&h, kind, &p) * (1.0 + 1e-12));
            }
        }
        let a = SpectralField::real_mode(g, [1, 0, 0], Complex64::new(1.0, 0.0)).unwrap();
        let b = SpectralField::real_mode(g, [0, 1, 0], Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(inner_product(&a, &b, NormKind::H1Gevrey, &p).unwrap(), 0.0);
        assert!(inner_product(&a, &SpectralField::zeros(FrequencyGrid::new(6).unwrap()), NormKind::L2, &p).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn monotone_in_radius(seed in any::<u64>(), a1 in 0.0f64..1.5, da in 0.0f64..1.0, sigma in 1.0f64..3.0) {
            let g = FrequencyGrid::new(8).unwrap();
            let u = random_divergence_free_field(g, -1.0, (1.0, 2.5), seed).unwrap();
            let lo = GevreyParams { a: a1, sigma, s: 1.0, nu: 1.0 };
            let hi = GevreyParams { a: a1 + da, ..lo };
            prop_assert!(norm(&u, NormKind::H1GevreyDot, &lo) <= norm(&u, NormKind::H1GevreyDot, &hi) * (1.0 + 1e-14));
            prop_assert!(fourier_l1_weighted(&u, a1, sigma) <= fourier_l1_weighted(&u, a1 + da, sigma) * (1.0 + 1e-14));
            // Ḣ¹_{a,σ} ⊂ Ḣ¹_{a/√σ,σ}
            let shrunk = GevreyParams { a: (a1 + da) / sigma.sqrt(), ..hi };
            prop_assert!(norm(&u, NormKind::H1GevreyDot, &shrunk) <= norm(&u, NormKind::H1GevreyDot, &hi) * (1.0 + 1e-14));
        }

        #[test]
        fn cauchy_schwarz(s1 in any::<u64>(), s2 in any::<u64>(), a in 0.01f64..2.0, sigma in 1.0f64..3.0) {
            let g = FrequencyGrid::new(8).unwrap();
            let p = GevreyParams { a, sigma, s: 1.0, nu: 1.0 };
            let f = random_divergence_free_field(g, -1.0, (1.0, 2.5), s1).unwrap();
            let h = random_divergence_free_field(g, -1.0, (1.0, 2.5), s2).unwrap();
            for kind in NormKind::ALL {
                let ip = inner_product(&f, &h, kind, &p).unwrap();
                prop_assert!(ip.abs() <= norm(&f, kind, &p) * norm(&h, kind, &p) * (1.0 + 1e-12));
            }
        }
    }
}

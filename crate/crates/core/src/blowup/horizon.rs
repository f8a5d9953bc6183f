use serde::{Deserialize, Serialize};

use crate::mild::TrajectorySample;
use crate::norms::NormReport;
use crate::params::GevreyParams;
use crate::spectral::SpectralVectorField;

/// Constant `c` in the Gronwall bound for `‖u‖²_{Ḣ¹_{a,σ}}`.
pub const GRONWALL_C: f64 = 4096.0;

/// Guaranteed existence increments `ν/(2‖·‖²_{L¹})` at one time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HorizonReport {
    pub t: f64,
    pub l1_weighted: f64,
    pub l1_plain: f64,
    /// Infinite for a zero field.
    pub horizon_weighted: f64,
    pub horizon_plain: f64,
}

fn increment(nu: f64, l1: f64) -> f64 {
    if l1 == 0.0 {
        f64::INFINITY
    } else {
        nu / (2.0 * l1 * l1)
    }
}

impl HorizonReport {
    pub fn from_norms(t: f64, norms: &NormReport, nu: f64) -> Self {
        Self {
            t,
            l1_weighted: norms.fourier_l1_weighted,
            l1_plain: norms.fourier_l1,
            horizon_weighted: increment(nu, norms.fourier_l1_weighted),
            horizon_plain: increment(nu, norms.fourier_l1),
        }
    }
}

/// Horizons of `u` taken at time 0.
pub fn horizon(u: &SpectralVectorField, params: &GevreyParams) -> HorizonReport {
    HorizonReport::from_norms(0.0, &NormReport::of_spectral(u, params), params.nu)
}

pub fn horizon_series(samples: &[TrajectorySample], nu: f64) -> Vec<HorizonReport> {
    samples
        .iter()
        .map(|s| HorizonReport::from_norms(s.t, &s.norms, nu))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HorizonConsistency {
    pub samples: usize,
    pub pairs_checked: usize,
    /// Samples whose plain horizon reaches past a recorded failure time.
    pub contradictions: usize,
    pub weighted_below_plain: bool,
    pub gronwall_c: f64,
    /// Largest `‖u(t')‖² / (‖u(t)‖² e^{cν^{-1}∫_t^{t'}‖F(e^{(a/σ)|D|^{1/σ}}u)‖²_{L¹}})` over pairs.
    pub gronwall_worst_ratio: f64,
    pub gronwall_worst_pair: Option<(f64, f64)>,
    pub pass: bool,
}

/// Checks the horizons and the Gronwall bound along one trajectory. `failure_time` is the time
/// at which the computation broke down, if it did.
pub fn horizon_consistency(
    samples: &[TrajectorySample],
    nu: f64,
    c: f64,
    failure_time: Option<f64>,
) -> HorizonConsistency {
    let horizons = horizon_series(samples, nu);
    let contradictions = match failure_time {
        Some(tf) => horizons
            .iter()
            .filter(|h| h.t + h.horizon_plain > tf || h.t + h.horizon_weighted > tf)
            .count(),
        None => 0,
    };
    let weighted_below_plain = horizons
        .iter()
        .all(|h| h.horizon_weighted <= h.horizon_plain * (1.0 + 1e-12));

    // prefix integrals of ‖F(e^{(a/σ)|D|^{1/σ}}u)‖²_{L¹}
    let mut prefix = vec![0.0; samples.len()];
    for j in 1..samples.len() {
        let h = samples[j].t - samples[j - 1].t;
        let f = |s: &TrajectorySample| s.norms.fourier_l1_weighted.powi(2);
        prefix[j] = prefix[j - 1] + 0.5 * h * (f(&samples[j - 1]) + f(&samples[j]));
    }
    let mut worst = 0.0_f64;
    let mut worst_pair = None;
    let mut pairs = 0;
    for i in 0..samples.len() {
        let hi = samples[i].norms.h1_gevrey_dot;
        for j in i + 1..samples.len() {
            pairs += 1;
            let hj = samples[j].norms.h1_gevrey_dot;
            if hj == 0.0 {
                continue;
            }
            let log_ratio = 2.0 * (hj.ln() - hi.ln()) - c / nu * (prefix[j] - prefix[i]);
            let r = log_ratio.exp();
            if r > worst {
                worst = r;
                worst_pair = Some((samples[i].t, samples[j].t));
            }
        }
    }
    HorizonConsistency {
        samples: samples.len(),
        pairs_checked: pairs,
        contradictions,
        weighted_below_plain,
        gronwall_c: c,
        gronwall_worst_ratio: worst,
        gronwall_worst_pair: worst_pair,
        pass: contradictions == 0 && weighted_below_plain && worst <= 1.0 + crate::lab::RATIO_TOL,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mild::{timestep_integrate, Trajectory};
    use crate::spectral::{shear_mode, taylor_green_3d, FrequencyGrid};
    use num_complex::Complex64;

    #[test]
    fn shear_hand_values() {
        let g = FrequencyGrid::new(8).unwrap();
        let p = GevreyParams::new(1.0, 2.0, 1.0, 1.0).unwrap();
        let h = horizon(&shear_mode(g), &p);
        assert!((h.l1_plain - 2.0).abs() < 1e-15);
        assert!((h.horizon_plain - 0.125).abs() < 1e-15);
        assert!((h.l1_weighted - 2.0 * 0.5f64.exp()).abs() < 1e-14);
        assert!(h.horizon_weighted <= h.horizon_plain);
        let z = horizon(&SpectralVectorField::zeros(g), &p);
        assert!(z.horizon_plain.is_infinite() && z.horizon_weighted.is_infinite());
    }

    #[test]
    fn scaling_and_phase_invariance() {
        let g = FrequencyGrid::new(8).unwrap();
        let p = GevreyParams::new(0.3, 1.5, 1.0, 0.7).unwrap();
        let u = taylor_green_3d(g);
        let h1 = horizon(&u, &p);
        let h3 = horizon(&u.scaled(3.0), &p);
        assert!((h1.horizon_plain / 9.0 - h3.horizon_plain).abs() < 1e-14 * h1.horizon_plain);
        assert!((h1.horizon_weighted / 9.0 - h3.horizon_weighted).abs() < 1e-14 * h1.horizon_weighted);
        // translate by x₀: û(ξ) ↦ e^{-iξ·x₀} û(ξ)
        let x0 = [0.3, -1.1, 2.0];
        let mut v = u.clone();
        for idx in 0..g.len() {
            let k = g.wavevector(idx);
            let ph = Complex64::from_polar(1.0, -(k[0] as f64 * x0[0] + k[1] as f64 * x0[1] + k[2] as f64 * x0[2]));
            let c = v.coefficient(idx);
            v.set_coefficient(idx, c.map(|z| z * ph));
        }
        let hv = horizon(&v, &p);
        assert!((hv.horizon_plain - h1.horizon_plain).abs() < 1e-13 * h1.horizon_plain);
        assert!((hv.horizon_weighted - h1.horizon_weighted).abs() < 1e-13 * h1.horizon_weighted);
    }

    #[test]
    fn vacuous_and_heat_only() {
        let g = FrequencyGrid::new(8).unwrap();
        let p = GevreyParams::new(0.1, 1.5, 1.0, 1.0).unwrap();
        let single = Trajectory::constant(&shear_mode(g), vec![0.0], p).unwrap();
        let r = horizon_consistency(&single.samples(), p.nu, GRONWALL_C, None);
        assert!(r.pass && r.pairs_checked == 0);
        let heat = timestep_integrate(&shear_mode(g), 1.0, 0.1, &p).unwrap();
        let r = horizon_consistency(&heat.samples(), p.nu, 0.0, None);
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn decaying_nonlinear_trajectory() {
        let g = FrequencyGrid::new(8).unwrap();
        let p = GevreyParams::new(0.1, 1.5, 1.0, 0.5).unwrap();
        let traj = timestep_integrate(&taylor_green_3d(g).scaled(2.0), 1.0, 0.01, &p).unwrap();
        let r = horizon_consistency(&traj.samples(), p.nu, GRONWALL_C, None);
        assert!(r.pass, "{r:?}");
        // a failure before the guaranteed horizon is flagged
        let r = horizon_consistency(&traj.samples(), p.nu, GRONWALL_C, Some(0.5));
        assert!(r.contradictions > 0 && !r.pass);
    }
}

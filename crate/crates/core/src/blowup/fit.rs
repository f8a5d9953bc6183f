//! Least-squares fit of a norm history against the blow-up envelope. Diagnostic only: the
//! fitted `T*` says nothing about whether a singularity exists.

use serde::{Deserialize, Serialize};

use super::envelope::{log_envelope, EnvelopeParams};
use crate::error::Result;
use crate::params::GevreyParams;

pub const MIN_FIT_SAMPLES: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ProfileFit {
    Fitted {
        tstar: f64,
        /// Multiplier on the envelope.
        scale: f64,
        /// Root-mean-square residual of `log ‖u‖`.
        rms_residual: f64,
        note: String,
    },
    NoFit {
        reason: String,
    },
}

/// Fits `log y = log s + log envelope(t; T*)` over `T* > t_last`.
pub fn fit_profile(
    times: &[f64],
    values: &[f64],
    ep: &EnvelopeParams,
    params: &GevreyParams,
) -> Result<ProfileFit> {
    let no_fit = |r: &str| Ok(ProfileFit::NoFit { reason: r.to_string() });
    if times.len() != values.len() || times.len() < MIN_FIT_SAMPLES {
        return no_fit("at least 8 paired samples required");
    }
    if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return no_fit("norms must be positive and finite");
    }
    let increasing = values.windows(2).filter(|w| w[1] > w[0]).count();
    if values.last() <= values.first() || 2 * increasing < values.len() {
        return no_fit("norm history is not growing");
    }
    let t_last = *times.last().expect("non-empty");
    let span = t_last - times[0];
    let logs: Vec<f64> = values.iter().map(|v| v.ln()).collect();

    // residual for T* = t_last + e^x, with the best log-scale
    let objective = |x: f64| -> Result<(f64, f64)> {
        let tstar = t_last + x.exp();
        let mut env = Vec::with_capacity(times.len());
        for &t in times {
            env.push(log_envelope(t, tstar, ep, params)?);
        }
        let n = times.len() as f64;
        let shift = logs.iter().zip(&env).map(|(y, e)| y - e).sum::<f64>() / n;
        let ss = logs.iter().zip(&env).map(|(y, e)| (y - e - shift).powi(2)).sum::<f64>();
        Ok(((ss / n).sqrt(), shift))
    };

    let (lo0, hi0) = ((1e-8 * span).ln(), (1e3 * span.max(1.0)).ln());
    let n = 400;
    let mut best = (f64::INFINITY, 0);
    let xs: Vec<f64> = (0..=n).map(|i| lo0 + (hi0 - lo0) * i as f64 / n as f64).collect();
    for (i, &x) in xs.iter().enumerate() {
        let r = objective(x)?.0;
        if r < best.0 {
            best = (r, i);
        }
    }
    let mut lo = xs[best.1.saturating_sub(1)];
    let mut hi = xs[(best.1 + 1).min(n)];
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (objective(x1)?.0, objective(x2)?.0);
    while hi - lo > 1e-13 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = objective(x1)?.0;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = objective(x2)?.0;
        }
    }
    let x = 0.5 * (lo + hi);
    let (rms, shift) = objective(x)?;
    Ok(ProfileFit::Fitted {
        tstar: t_last + x.exp(),
        scale: shift.exp(),
        rms_residual: rms,
        note: "diagnostic only".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::envelope::{envelope, envelope_constants};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    fn setup() -> (GevreyParams, EnvelopeParams, Vec<f64>) {
        let p = GevreyParams::new(0.5, 1.5, 1.0, 1.0).unwrap();
        let ep = envelope_constants(1.0, &p).unwrap();
        let times: Vec<f64> = (0..40).map(|i| 0.9 * i as f64 / 39.0).collect();
        (p, ep, times)
    }

    #[test]
    fn exact_round_trip() {
        let (p, ep, times) = setup();
        let vals: Vec<f64> = times.iter().map(|&t| 2.5 * envelope(t, 1.0, &ep, &p).unwrap()).collect();
        match fit_profile(&times, &vals, &ep, &p).unwrap() {
            ProfileFit::Fitted { tstar, scale, rms_residual, .. } => {
                assert!((tstar - 1.0).abs() < 1e-4, "T* = {tstar}");
                assert!((scale - 2.5).abs() < 1e-3);
                assert!(rms_residual < 1e-6);
            }
            f => panic!("{f:?}"),
        }
    }

    #[test]
    fn noisy_round_trip() {
        let (p, ep, times) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let noise = Normal::new(0.0, 0.01).unwrap();
        let vals: Vec<f64> = times
            .iter()
            .map(|&t| envelope(t, 1.0, &ep, &p).unwrap() * (1.0 + noise.sample(&mut rng)))
            .collect();
        match fit_profile(&times, &vals, &ep, &p).unwrap() {
            ProfileFit::Fitted { tstar, .. } => assert!((tstar - 1.0).abs() < 1e-2, "T* = {tstar}"),
            f => panic!("{f:?}"),
        }
    }

    #[test]
    fn decaying_history_is_not_fitted() {
        let (p, ep, times) = setup();
        let vals: Vec<f64> = times.iter().map(|t| (-t).exp()).collect();
        assert!(matches!(fit_profile(&times, &vals, &ep, &p).unwrap(), ProfileFit::NoFit { .. }));
        assert!(matches!(fit_profile(&times[..5], &vals[..5], &ep, &p).unwrap(), ProfileFit::NoFit { .. }));
    }
}

//! Restarting the Picard solver on successive certified windows.

use serde::{Deserialize, Serialize};

use super::certificate::{largest_certified_window, SMOOTHING_CONSTANT_K};
use super::picard::{picard_solve, PicardOptions, PicardTrace};
use super::trajectory::Trajectory;
use crate::error::{Error, Result};
use crate::norms::{norm, NormKind};
use crate::params::GevreyParams;
use crate::spectral::SpectralVectorField;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Stop {
    /// Stop at this absolute time.
    Budget(f64),
    /// Stop when `kind` crosses `value` (either direction), or at the time budget.
    Threshold { kind: NormKind, value: f64, budget: f64 },
}

impl Stop {
    fn budget(&self) -> f64 {
        match *self {
            Stop::Budget(b) => b,
            Stop::Threshold { budget, .. } => budget,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowPolicy {
    /// Fraction of the largest certified window actually used.
    pub safety: f64,
    pub max_window: f64,
    /// Certified windows shorter than this end the run.
    pub floor: f64,
    pub max_windows: usize,
    pub picard: PicardOptions,
}

impl Default for WindowPolicy {
    fn default() -> Self {
        Self {
            safety: 0.9,
            max_window: 1.0,
            floor: 1e-8,
            max_windows: 10_000,
            picard: PicardOptions { k: SMOOTHING_CONSTANT_K, ..Default::default() },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContinuationStatus {
    BudgetReached,
    ThresholdCrossed,
    UncertifiedContinuation,
    PicardDiverged,
    WindowLimit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowRecord {
    pub start: f64,
    pub length: f64,
    pub trace: PicardTrace,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuationReport {
    pub status: ContinuationStatus,
    pub windows: Vec<WindowRecord>,
}

pub fn continue_until(
    u0: &SpectralVectorField,
    params: &GevreyParams,
    stop: Stop,
    policy: &WindowPolicy,
) -> Result<(Trajectory, ContinuationReport)> {
    params.validate()?;
    u0.validate_velocity()?;
    let budget = stop.budget();
    if !(budget.is_finite() && budget >= 0.0) {
        return Err(Error::InvalidParameter(format!("time budget must be >= 0, got {budget}")));
    }
    if !(policy.safety > 0.0 && policy.safety <= 1.0 && policy.max_window > 0.0) {
        return Err(Error::InvalidParameter("invalid window policy".into()));
    }
    let mut traj = Trajectory::new(vec![0.0], vec![u0.clone()], *params)?;
    let mut windows = Vec::new();
    let side = |u: &SpectralVectorField| match stop {
        Stop::Threshold { kind, value, .. } => Some(norm(u, kind, params) > value),
        Stop::Budget(_) => None,
    };
    let start_side = side(u0);

    let status = loop {
        let t0 = traj.last_time();
        if t0 >= budget * (1.0 - 1e-14) {
            break ContinuationStatus::BudgetReached;
        }
        if windows.len() >= policy.max_windows {
            break ContinuationStatus::WindowLimit;
        }
        let u = traj.final_state().clone();
        let certified = largest_certified_window(&u, params, policy.picard.k)?
            .map_or(f64::INFINITY, |w| policy.safety * w);
        if certified < policy.floor {
            break ContinuationStatus::UncertifiedContinuation;
        }
        let remaining = budget - t0;
        let length = certified.min(policy.max_window).min(remaining);
        let (piece, trace) = picard_solve(&u, length, params, &policy.picard)?;
        let converged = trace.converged;
        windows.push(WindowRecord { start: t0, length, trace });
        if !converged {
            break ContinuationStatus::PicardDiverged;
        }
        let before = traj.len();
        traj.extend_shifted(&piece, t0);
        if let Some(s0) = start_side {
            if let Some(j) = (before..traj.len()).find(|&j| side(&traj.states[j]) != Some(s0)) {
                traj.truncate(j + 1);
                break ContinuationStatus::ThresholdCrossed;
            }
        }
        if length == remaining {
            // snap the final time onto the budget exactly
            *traj.times.last_mut().expect("non-empty") = budget;
            break ContinuationStatus::BudgetReached;
        }
    };
    Ok((traj, ContinuationReport { status, windows }))
}

//! Integrating-factor RK4 in the variable `v̂(t,ξ) = e^{νt|ξ|²} û(t,ξ)`.

use super::trajectory::{Trajectory, TrajectorySample};
use crate::error::{Error, Result};
use crate::norms::NormReport;
use crate::params::GevreyParams;
use crate::spectral::{nonlinear_term, FrequencyGrid, SpectralVectorField};

struct HalfStep {
    e: Vec<f64>,
}

impl HalfStep {
    fn new(grid: FrequencyGrid, nu: f64, h: f64) -> Self {
        let kmax = grid.n() / 2;
        let shells = 3 * kmax * kmax + 1;
        Self { e: (0..shells).map(|k2| (-nu * k2 as f64 * h / 2.0).exp()).collect() }
    }

    /// `u ← E^p u` with `E = e^{-ν|ξ|²h/2}`.
    fn apply(&self, u: &mut SpectralVectorField, p: i32) {
        let grid = u.grid();
        for c in 0..3 {
            for (idx, z) in u.component_mut(c).coeffs_mut().iter_mut().enumerate() {
                *z *= self.e[grid.norm_sq(idx) as usize].powi(p);
            }
        }
    }

    fn applied(&self, u: &SpectralVectorField, p: i32) -> SpectralVectorField {
        let mut out = u.clone();
        self.apply(&mut out, p);
        out
    }
}

/// `-ℙ div(u ⊗ u)`.
fn rhs(u: &SpectralVectorField) -> Result<SpectralVectorField> {
    let mut n = nonlinear_term(u)?;
    n.scale(-1.0);
    Ok(n)
}

fn step(u: &SpectralVectorField, h: f64, e: &HalfStep) -> Result<SpectralVectorField> {
    let n1 = rhs(u)?;
    let mut a2 = u.clone();
    a2.axpy(h / 2.0, &n1)?;
    e.apply(&mut a2, 1);
    let n2 = rhs(&a2)?;

    let mut a3 = e.applied(u, 1);
    a3.axpy(h / 2.0, &n2)?;
    let n3 = rhs(&a3)?;

    let mut a4 = e.applied(u, 2);
    a4.axpy(h, &e.applied(&n3, 1))?;
    let n4 = rhs(&a4)?;

    let mut out = e.applied(u, 2);
    out.axpy(h / 6.0, &e.applied(&n1, 2))?;
    out.axpy(h / 3.0, &e.applied(&n2, 1))?;
    out.axpy(h / 3.0, &e.applied(&n3, 1))?;
    out.axpy(h / 6.0, &n4)?;
    out.dealias();
    crate::spectral::operators::leray_project_in_place(&mut out);
    Ok(out)
}

/// Number of uniform steps covering `[0, T]` with step at most `dt`.
pub fn step_count(t_end: f64, dt: f64) -> usize {
    ((t_end / dt - 1e-9).ceil() as usize).max(1)
}

fn march<F>(u0: &SpectralVectorField, t_end: f64, dt: f64, params: &GevreyParams, mut observe: F) -> Result<Option<String>>
where
    F: FnMut(usize, f64, &SpectralVectorField) -> bool,
{
    params.validate()?;
    u0.validate_velocity()?;
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParameter(format!("dt must be > 0, got {dt}")));
    }
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(Error::InvalidParameter(format!("final time must be >= 0, got {t_end}")));
    }
    if t_end == 0.0 {
        return Ok(None);
    }
    let n = step_count(t_end, dt);
    let h = t_end / n as f64;
    let e = HalfStep::new(u0.grid(), params.nu, h);
    let mut u = u0.clone();
    for j in 1..=n {
        match step(&u, h, &e) {
            Ok(next) if next.is_finite() => u = next,
            Ok(_) => return Ok(Some(format!("non-finite state at step {j}"))),
            Err(err) => return Ok(Some(format!("step {j}: {err}"))),
        }
        let t = if j == n { t_end } else { h * j as f64 };
        if !observe(j, t, &u) {
            break;
        }
    }
    Ok(None)
}

/// Integrates to `T` with `ceil(T/dt)` equal steps, calling `observe(step, t, state)` after
/// each one. Returns `false` from `observe` to stop early.
pub fn timestep_integrate_with<F>(
    u0: &SpectralVectorField,
    t_end: f64,
    dt: f64,
    params: &GevreyParams,
    mut observe: F,
) -> Result<Trajectory>
where
    F: FnMut(usize, f64, &SpectralVectorField) -> bool,
{
    let mut traj = Trajectory::new(vec![0.0], vec![u0.clone()], *params)?;
    let (mut times, mut states) = (Vec::new(), Vec::new());
    traj.failure = march(u0, t_end, dt, params, |j, t, u| {
        times.push(t);
        states.push(u.clone());
        observe(j, t, u)
    })?;
    traj.times.extend(times);
    traj.states.extend(states);
    Ok(traj)
}

/// Like [`timestep_integrate`] but keeps only the norms at each step, plus the final state and
/// the failure message if any. Memory stays flat in the number of steps.
pub fn timestep_samples(
    u0: &SpectralVectorField,
    t_end: f64,
    dt: f64,
    params: &GevreyParams,
) -> Result<(Vec<TrajectorySample>, SpectralVectorField, Option<String>)> {
    let mut samples = vec![TrajectorySample { t: 0.0, norms: NormReport::of(u0, params) }];
    let mut last = u0.clone();
    let failure = march(u0, t_end, dt, params, |_, t, u| {
        samples.push(TrajectorySample { t, norms: NormReport::of(u, params) });
        last.clone_from(u);
        true
    })?;
    Ok((samples, last, failure))
}

pub fn timestep_integrate(
    u0: &SpectralVectorField,
    t_end: f64,
    dt: f64,
    params: &GevreyParams,
) -> Result<Trajectory> {
    timestep_integrate_with(u0, t_end, dt, params, |_, _, _| true)
}

use serde::{Deserialize, Serialize};

use super::certificate::{smallness_certificate_with, SmallnessCertificate, SMOOTHING_CONSTANT_K};
use super::duhamel::duhamel_bilinear_nodes;
use super::trajectory::{uniform_nodes, Trajectory};
use crate::error::{Error, Result};
use crate::norms::{norm, NormKind};
use crate::params::GevreyParams;
use crate::spectral::{heat_propagate_vector, SpectralVectorField};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PicardOptions {
    pub nodes: usize,
    pub tol: f64,
    pub max_iter: usize,
    /// Smoothing constant used for the certificate.
    pub k: f64,
}

impl Default for PicardOptions {
    fn default() -> Self {
        Self { nodes: 33, tol: 1e-12, max_iter: 60, k: SMOOTHING_CONSTANT_K }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PicardTrace {
    /// Sup-over-nodes `H¹_{a,σ}` norm of each iterate, starting with the heat trajectory.
    pub iterate_norms: Vec<f64>,
    /// Sup-over-nodes `H¹_{a,σ}` norm of `u⁽ⁿ⁺¹⁾ - u⁽ⁿ⁾`.
    pub deltas: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub certificate: SmallnessCertificate,
    /// `deltas[n+1] / deltas[n]`.
    pub contraction_factors: Vec<f64>,
    /// Sup-node norm of `u - y - B(u,u)` for the returned trajectory.
    pub residual: f64,
    /// `‖u⁽ⁿ⁾‖ <= 2‖y‖` for every iterate.
    pub bound_2y_holds: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failure: Option<String>,
}

impl PicardTrace {
    pub fn max_contraction(&self) -> Option<f64> {
        self.contraction_factors.iter().copied().reduce(f64::max)
    }
}

fn sup_norm(states: &[SpectralVectorField], params: &GevreyParams) -> f64 {
    states
        .iter()
        .map(|u| norm(u, NormKind::H1Gevrey, params))
        .fold(0.0, f64::max)
}

fn sup_difference(a: &[SpectralVectorField], b: &[SpectralVectorField], params: &GevreyParams) -> Result<f64> {
    let mut m = 0.0_f64;
    for (x, y) in a.iter().zip(b) {
        m = m.max(norm(&x.difference(y)?, NormKind::H1Gevrey, params));
    }
    Ok(m)
}

/// `y + B(u, u)` on the nodes of `u`.
fn picard_map(y: &[SpectralVectorField], u: &Trajectory) -> Result<Vec<SpectralVectorField>> {
    let b = duhamel_bilinear_nodes(u, u)?;
    b.into_iter()
        .zip(y)
        .map(|(mut bi, yi)| {
            bi.axpy(1.0, yi)?;
            Ok(bi)
        })
        .collect()
}

/// Heat trajectory `e^{νtΔ}u⁰` on the given nodes.
pub fn heat_trajectory(u0: &SpectralVectorField, times: &[f64], params: &GevreyParams) -> Result<Vec<SpectralVectorField>> {
    times.iter().map(|&t| heat_propagate_vector(u0, params.nu, t)).collect()
}

/// Picard iteration for `u = e^{νtΔ}u⁰ + B(u,u)` on `nodes` uniform times in `[0, T]`.
///
/// Non-convergence is reported through the trace, not as an error.
pub fn picard_solve(
    u0: &SpectralVectorField,
    t_end: f64,
    params: &GevreyParams,
    opts: &PicardOptions,
) -> Result<(Trajectory, PicardTrace)> {
    params.validate()?;
    u0.validate_velocity()?;
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be > 0, got {}", opts.tol)));
    }
    let times = uniform_nodes(t_end, opts.nodes)?;
    let certificate = smallness_certificate_with(u0, t_end, params, opts.k)?;
    let y = heat_trajectory(u0, &times, params)?;

    let mut current = Trajectory::new(times.clone(), y.clone(), *params)?;
    let mut iterate_norms = vec![sup_norm(&y, params)];
    let mut deltas = Vec::new();
    let mut converged = false;
    let mut failure = None;

    while deltas.len() < opts.max_iter {
        let next = match picard_map(&y, &current) {
            Ok(next) => next,
            Err(e) => {
                failure = Some(e.to_string());
                break;
            }
        };
        let delta = sup_difference(&next, &current.states, params)?;
        let nrm = sup_norm(&next, params);
        if !(delta.is_finite() && nrm.is_finite()) {
            failure = Some("non-finite Picard iterate".into());
            break;
        }
        deltas.push(delta);
        iterate_norms.push(nrm);
        current = Trajectory::new(times.clone(), next, *params)?;
        if delta <= opts.tol {
            converged = true;
            break;
        }
    }

    let residual = match picard_map(&y, &current) {
        Ok(next) => sup_difference(&next, &current.states, params)?,
        Err(_) => f64::INFINITY,
    };
    let contraction_factors = deltas
        .windows(2)
        .filter(|w| w[0] > 0.0)
        .map(|w| w[1] / w[0])
        .collect();
    let bound = 2.0 * certificate.y_norm * (1.0 + 1e-9);
    let bound_2y_holds = iterate_norms.iter().all(|&n| n <= bound);
    current.failure = failure.clone();
    let trace = PicardTrace {
        iterations: deltas.len(),
        iterate_norms,
        deltas,
        converged,
        certificate,
        contraction_factors,
        residual,
        bound_2y_holds,
        failure,
    };
    Ok((current, trace))
}

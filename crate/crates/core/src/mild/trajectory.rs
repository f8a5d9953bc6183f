use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::NormReport;
use crate::params::GevreyParams;
use crate::spectral::{FrequencyGrid, SpectralVectorField};

/// Velocity states at strictly increasing times starting from 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<SpectralVectorField>,
    pub params: GevreyParams,
    /// Set when integration stopped early on a non-finite state.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failure: Option<String>,
}

/// One time-stamped row of norms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub norms: NormReport,
}

/// `nodes` equispaced times on `[0, t_end]`.
pub fn uniform_nodes(t_end: f64, nodes: usize) -> Result<Vec<f64>> {
    if nodes < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 nodes, got {nodes}")));
    }
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::InvalidParameter(format!("final time must be > 0, got {t_end}")));
    }
    let m = (nodes - 1) as f64;
    Ok((0..nodes)
        .map(|j| if j == nodes - 1 { t_end } else { t_end * j as f64 / m })
        .collect())
}

impl Trajectory {
    pub fn new(times: Vec<f64>, states: Vec<SpectralVectorField>, params: GevreyParams) -> Result<Self> {
        if times.is_empty() || times.len() != states.len() {
            return Err(Error::InvalidParameter(format!(
                "{} times for {} states",
                times.len(),
                states.len()
            )));
        }
        if times[0] != 0.0 {
            return Err(Error::InvalidParameter("trajectories start at t = 0".into()));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("times must increase strictly".into()));
        }
        let grid = states[0].grid();
        for s in &states {
            grid.ensure_same(&s.grid())?;
        }
        Ok(Self { times, states, params, failure: None })
    }

    /// `u(τ) ≡ u` on the given nodes.
    pub fn constant(u: &SpectralVectorField, times: Vec<f64>, params: GevreyParams) -> Result<Self> {
        let states = vec![u.clone(); times.len()];
        Self::new(times, states, params)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn grid(&self) -> FrequencyGrid {
        self.states[0].grid()
    }

    pub fn last_time(&self) -> f64 {
        *self.times.last().expect("non-empty")
    }

    pub fn final_state(&self) -> &SpectralVectorField {
        self.states.last().expect("non-empty")
    }

    pub fn samples(&self) -> Vec<TrajectorySample> {
        self.times
            .iter()
            .zip(&self.states)
            .map(|(&t, u)| TrajectorySample { t, norms: NormReport::of(u, &self.params) })
            .collect()
    }

    /// Appends `other` shifted by `offset`, dropping its first state (the shared endpoint).
    pub fn extend_shifted(&mut self, other: &Trajectory, offset: f64) {
        for (t, u) in other.times.iter().zip(&other.states).skip(1) {
            self.times.push(offset + t);
            self.states.push(u.clone());
        }
    }

    pub fn truncate(&mut self, len: usize) {
        self.times.truncate(len);
        self.states.truncate(len);
    }
}

/// CSV with a `t` column followed by the [`NormReport`] columns; `#` lines are comments.
pub fn samples_to_csv(samples: &[TrajectorySample]) -> String {
    let mut out = format!("t,{}\n", NormReport::csv_header());
    for s in samples {
        out.push_str(&format!("{:e},{}\n", s.t, s.norms.csv_row()));
    }
    out
}

pub fn samples_from_csv(text: &str) -> Result<Vec<TrajectorySample>> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::InvalidParameter("empty trajectory CSV".into()))?;
    let expected = format!("t,{}", NormReport::csv_header());
    if header.trim() != expected {
        return Err(Error::InvalidParameter(format!("unexpected CSV header {header:?}")));
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let vals = line
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| Error::InvalidParameter(format!("row {}: {e}", i + 1)))?;
        if vals.len() != 1 + NormReport::COLUMNS.len() {
            return Err(Error::InvalidParameter(format!("row {}: {} columns", i + 1, vals.len())));
        }
        let norms = NormReport {
            l2: vals[1],
            h1_dot: vals[2],
            hs_dot: vals[3],
            h1_gevrey_dot: vals[4],
            h1_gevrey: vals[5],
            fourier_l1_weighted: vals[6],
            fourier_l1: vals[7],
            grad_l2: vals[8],
        };
        out.push(TrajectorySample { t: vals[0], norms });
    }
    if out.windows(2).any(|w| !(w[1].t > w[0].t)) {
        return Err(Error::InvalidParameter("CSV times must increase strictly".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::shear_mode;

    #[test]
    fn nodes_and_validation() {
        let n = uniform_nodes(1.0, 5).unwrap();
        assert_eq!(n, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(uniform_nodes(1.0, 1).is_err());
        assert!(uniform_nodes(0.0, 3).is_err());
        let g = FrequencyGrid::new(8).unwrap();
        let u = shear_mode(g);
        let p = GevreyParams::default();
        assert!(Trajectory::new(vec![0.0, 0.0], vec![u.clone(), u.clone()], p).is_err());
        assert!(Trajectory::new(vec![0.1], vec![u.clone()], p).is_err());
        let t = Trajectory::constant(&u, n, p).unwrap();
        assert_eq!(t.len(), 5);
        assert_eq!(t.samples()[3].norms, NormReport::of(&u, &p));
    }

    #[test]
    fn csv_round_trip() {
        let g = FrequencyGrid::new(8).unwrap();
        let p = GevreyParams::default();
        let t = Trajectory::constant(&shear_mode(g).scaled(0.3), vec![0.0, 0.1, 0.25], p).unwrap();
        let text = format!("# comment\n{}", samples_to_csv(&t.samples()));
        assert_eq!(samples_from_csv(&text).unwrap(), t.samples());
        assert!(samples_from_csv("t,x\n1,2\n").is_err());
        assert!(samples_from_csv("").is_err());
    }
}

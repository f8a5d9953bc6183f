use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Parser, Debug)]
#[command(name = "gevrey-ns", version, about = "Sobolev-Gevrey Navier-Stokes toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Subcommand, Debug)]
pub enum CliCommand {
    /// Run randomized inequality suites.
    Verify(Flags),
    /// Solve from an initial datum (Picard, time stepping, or continuation).
    Solve(Flags),
    /// Diagnostics for a trajectory CSV.
    Monitor(Flags),
    /// Explicit constants for given parameters.
    Constants(Flags),
    /// Re-run a manifest and compare artifacts byte for byte.
    Replay(ReplayArgs),
}

#[derive(Args, Debug)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
}

/// Flags shared by the run subcommands; unset flags fall back to the config file, then defaults.
#[derive(Args, Debug, Default, Serialize)]
pub struct Flags {
    /// JSON config file; flags override its entries.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[arg(long = "N")]
    #[serde(rename = "n", skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    /// taylor-green | taylor-green-3d | single-mode | random:SEED | file:PATH
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial: Option<String>,
    /// Multiplier applied to the initial datum.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[arg(long = "T")]
    #[serde(rename = "t_end", skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<SolveMode>,
    /// Stop continuation when the L² norm crosses this value.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    /// Smoothing constant used by the certificate.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smoothing_k: Option<f64>,
    /// Comma-separated suite names, or `all`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Upper edge of the random-field band.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kmax: Option<f64>,
    /// Trajectory CSV for `monitor`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    /// Also fit the blow-up envelope to the `h1_gevrey` column.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<bool>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gronwall_c: Option<f64>,
    #[arg(long = "u0-l2")]
    #[serde(rename = "u0_l2", skip_serializing_if = "Option::is_none")]
    pub u0_l2: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SolveMode {
    Picard,
    Timestep,
    Continue,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Verify,
    Solve,
    Monitor,
    Constants,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Verify => "verify",
            Command::Solve => "solve",
            Command::Monitor => "monitor",
            Command::Constants => "constants",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InitialData {
    TaylorGreen,
    TaylorGreen3d,
    SingleMode,
    Random(u64),
    File(PathBuf),
}

impl FromStr for InitialData {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "taylor-green" => InitialData::TaylorGreen,
            "taylor-green-3d" => InitialData::TaylorGreen3d,
            "single-mode" => InitialData::SingleMode,
            _ => {
                if let Some(seed) = s.strip_prefix("random:") {
                    InitialData::Random(seed.parse().with_context(|| format!("bad seed in {s:?}"))?)
                } else if let Some(path) = s.strip_prefix("file:") {
                    InitialData::File(PathBuf::from(path))
                } else {
                    bail!("unknown initial datum {s:?}")
                }
            }
        })
    }
}

/// Fully resolved configuration; written verbatim into the manifest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub n: usize,
    pub a: f64,
    pub sigma: f64,
    pub s: f64,
    pub nu: f64,
    pub initial: String,
    pub amplitude: f64,
    pub t_end: f64,
    pub dt: f64,
    pub nodes: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub mode: SolveMode,
    pub threshold: Option<f64>,
    pub smoothing_k: f64,
    pub suite: String,
    pub trials: usize,
    pub seed: u64,
    pub kmax: Option<f64>,
    pub input: Option<PathBuf>,
    pub fit: bool,
    pub gronwall_c: f64,
    pub u0_l2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: Command::Verify,
            n: 16,
            a: 0.1,
            sigma: 1.5,
            s: 1.0,
            nu: 1.0,
            initial: "taylor-green".into(),
            amplitude: 1.0,
            t_end: 0.1,
            dt: 1e-3,
            nodes: 33,
            tol: 1e-10,
            max_iter: 60,
            mode: SolveMode::Picard,
            threshold: None,
            smoothing_k: gevrey_ns::mild::SMOOTHING_CONSTANT_K,
            suite: "all".into(),
            trials: 200,
            seed: 0,
            kmax: None,
            input: None,
            fit: false,
            gronwall_c: gevrey_ns::blowup::GRONWALL_C,
            u0_l2: None,
            output_dir: None,
        }
    }
}

fn merge(base: &mut Map<String, Value>, over: Map<String, Value>) {
    for (k, v) in over {
        base.insert(k, v);
    }
}

impl RunConfig {
    /// Defaults, then the config file, then flags.
    pub fn resolve(command: Command, flags: &Flags) -> Result<Self> {
        let mut map = Map::new();
        if let Some(path) = &flags.config {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            match serde_json::from_str::<Value>(&text).context("config is not JSON")? {
                Value::Object(m) => merge(&mut map, m),
                _ => bail!("config must be a JSON object"),
            }
        }
        match serde_json::to_value(flags)? {
            Value::Object(m) => merge(&mut map, m),
            _ => unreachable!("flags serialize to an object"),
        }
        map.insert("command".into(), serde_json::to_value(command)?);
        let cfg: RunConfig = serde_json::from_value(Value::Object(map)).context("invalid config")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        gevrey_ns::FrequencyGrid::new(self.n).map_err(|e| anyhow!("{e}"))?;
        self.params()?;
        if self.command == Command::Solve {
            self.initial_data()?;
            if !(self.t_end.is_finite() && self.t_end >= 0.0) {
                bail!("T must be >= 0");
            }
            if self.mode == SolveMode::Picard && self.t_end == 0.0 {
                bail!("Picard needs T > 0");
            }
            if !(self.dt > 0.0) || self.nodes < 2 || !(self.tol > 0.0) || !self.amplitude.is_finite() {
                bail!("dt and tol must be > 0, nodes >= 2, amplitude finite");
            }
        }
        if self.command == Command::Verify {
            self.suites()?;
            if self.trials == 0 {
                bail!("trials must be >= 1");
            }
        }
        if self.command == Command::Monitor && self.input.is_none() {
            bail!("monitor needs --input");
        }
        if self.command == Command::Constants && !(self.sigma > 1.0) {
            bail!("constants need sigma > 1");
        }
        Ok(())
    }

    pub fn params(&self) -> Result<gevrey_ns::GevreyParams> {
        gevrey_ns::GevreyParams::new(self.a, self.sigma, self.s, self.nu).map_err(|e| anyhow!("{e}"))
    }

    pub fn initial_data(&self) -> Result<InitialData> {
        self.initial.parse()
    }

    pub fn suites(&self) -> Result<Vec<gevrey_ns::lab::Suite>> {
        if self.suite == "all" {
            return Ok(gevrey_ns::lab::Suite::ALL.to_vec());
        }
        self.suite
            .split(',')
            .map(|s| s.trim().parse().map_err(|e| anyhow!("{e}")))
            .collect()
    }

    /// Input files read by this run.
    pub fn inputs(&self) -> Vec<PathBuf> {
        let mut v = Vec::new();
        if self.command == Command::Monitor {
            v.extend(self.input.clone());
        }
        if self.command == Command::Solve {
            if let Ok(InitialData::File(p)) = self.initial_data() {
                v.push(p);
            }
        }
        v
    }

    /// The config without the output location, which does not affect any artifact.
    pub fn identity(&self) -> RunConfig {
        RunConfig { output_dir: None, ..self.clone() }
    }
}

pub fn default_output_dir() -> PathBuf {
    Path::new("runs").join(chrono::Utc::now().format("%Y%m%dT%H%M%S%.3fZ").to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, r#"{"n": 8, "nu": 0.5, "trials": 3}"#).unwrap();
        let flags = Flags { config: Some(path), nu: Some(2.0), ..Default::default() };
        let cfg = RunConfig::resolve(Command::Verify, &flags).unwrap();
        assert_eq!((cfg.n, cfg.nu, cfg.trials), (8, 2.0, 3));
        assert_eq!(cfg.a, 0.1);
    }

    #[test]
    fn rejects_bad_values() {
        let bad = Flags { n: Some(7), ..Default::default() };
        assert!(RunConfig::resolve(Command::Verify, &bad).is_err());
        let bad = Flags { suite: Some("nope".into()), ..Default::default() };
        assert!(RunConfig::resolve(Command::Verify, &bad).is_err());
        let bad = Flags { initial: Some("random:x".into()), ..Default::default() };
        assert!(RunConfig::resolve(Command::Solve, &bad).is_err());
        assert!(RunConfig::resolve(Command::Monitor, &Flags::default()).is_err());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, r#"{"unknown_key": 1}"#).unwrap();
        assert!(RunConfig::resolve(Command::Verify, &Flags { config: Some(path), ..Default::default() }).is_err());
    }

    #[test]
    fn initial_specs() {
        assert_eq!("random:12".parse::<InitialData>().unwrap(), InitialData::Random(12));
        assert_eq!("file:a/b".parse::<InitialData>().unwrap(), InitialData::File("a/b".into()));
        assert!("vortex".parse::<InitialData>().is_err());
    }
}

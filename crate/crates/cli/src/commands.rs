use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use serde_json::{json, Value};

use gevrey_ns::blowup::{
    c_a_sigma, energy_ledger, envelope_constants, fit_profile, horizon_consistency, horizon_series, infimum_b,
    ProfileFit,
};
use gevrey_ns::lab::{cdelta, cdelta_limit, m_bound, run_suite, SweepConfig};
use gevrey_ns::mild::{
    continue_until, picard_solve, samples_from_csv, samples_to_csv, timestep_samples, ContinuationStatus,
    PicardOptions, Stop, WindowPolicy,
};
use gevrey_ns::norms::NormKind;
use gevrey_ns::spectral::{
    random_divergence_free_field, read_vector_snapshot, shear_mode, taylor_green, taylor_green_3d,
};
use gevrey_ns::{FrequencyGrid, SpectralVectorField};

use crate::config::{Command, InitialData, RunConfig, SolveMode};

/// Result of one subcommand: whether its checks passed and the files it wrote.
pub struct Outcome {
    pub pass: bool,
    pub artifacts: Vec<PathBuf>,
}

struct Writer<'a> {
    dir: &'a Path,
    hash: &'a str,
    files: Vec<PathBuf>,
}

impl Writer<'_> {
    fn csv(&mut self, name: &str, body: &str) -> Result<()> {
        self.put(name, format!("# run_hash={}\n{body}", self.hash))
    }

    fn json(&mut self, name: &str, mut value: Value) -> Result<()> {
        if let Value::Object(m) = &mut value {
            m.insert("run_hash".into(), Value::String(self.hash.to_string()));
        }
        self.put(name, serde_json::to_string_pretty(&value)? + "\n")
    }

    fn put(&mut self, name: &str, body: String) -> Result<()> {
        fs::write(self.dir.join(name), body).with_context(|| format!("writing {name}"))?;
        self.files.push(PathBuf::from(name));
        Ok(())
    }
}

/// Marks an error as a numerical failure (exit 1) rather than a usage error.
#[derive(Debug)]
pub struct NumericalFailure(pub String);

impl std::fmt::Display for NumericalFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for NumericalFailure {}

fn numerical(e: gevrey_ns::Error) -> anyhow::Error {
    match e {
        gevrey_ns::Error::NumericalFailure(m) => anyhow!(NumericalFailure(m)),
        other => anyhow!(other),
    }
}

pub fn execute(cfg: &RunConfig, dir: &Path, hash: &str) -> Result<Outcome> {
    let mut w = Writer { dir, hash, files: Vec::new() };
    let pass = match cfg.command {
        Command::Verify => verify(cfg, &mut w)?,
        Command::Solve => solve(cfg, &mut w)?,
        Command::Monitor => monitor(cfg, &mut w)?,
        Command::Constants => constants(cfg, &mut w)?,
    };
    Ok(Outcome { pass, artifacts: w.files })
}

fn verify(cfg: &RunConfig, w: &mut Writer) -> Result<bool> {
    let mut sweep = SweepConfig::new(cfg.n, cfg.trials, cfg.seed);
    sweep.kmax = cfg.kmax;
    let mut reports = Vec::new();
    for suite in cfg.suites()? {
        reports.push(run_suite(suite, &sweep).map_err(numerical)?);
    }
    let mut csv = String::from("name,trials,max_ratio,pass,empirical_constant\n");
    for r in &reports {
        csv.push_str(&format!(
            "{},{},{:e},{},{}\n",
            r.suite,
            r.trials,
            r.max_ratio,
            r.pass,
            r.empirical_constant.map(|c| format!("{c:e}")).unwrap_or_default()
        ));
    }
    let pass = reports.iter().all(|r| r.pass);
    w.json("verdicts.json", json!({ "pass": pass, "verdicts": reports }))?;
    w.csv("summary.csv", &csv)?;
    Ok(pass)
}

pub fn initial_field(cfg: &RunConfig) -> Result<SpectralVectorField> {
    let grid = FrequencyGrid::new(cfg.n).map_err(|e| anyhow!("{e}"))?;
    let u = match cfg.initial_data()? {
        InitialData::TaylorGreen => taylor_green(grid),
        InitialData::TaylorGreen3d => taylor_green_3d(grid),
        InitialData::SingleMode => shear_mode(grid),
        InitialData::Random(seed) => {
            let kmax = cfg.kmax.unwrap_or(grid.dealias_cutoff() as f64);
            random_divergence_free_field(grid, -1.0, (1.0, kmax), seed).map_err(|e| anyhow!("{e}"))?
        }
        InitialData::File(path) => {
            let u = read_vector_snapshot(&path).map_err(|e| anyhow!("{}: {e}", path.display()))?;
            grid.ensure_same(&u.grid()).map_err(|e| anyhow!("{e}"))?;
            u
        }
    };
    let u = u.scaled(cfg.amplitude);
    u.validate_velocity().map_err(|e| anyhow!("initial datum: {e}"))?;
    Ok(u)
}

fn solve(cfg: &RunConfig, w: &mut Writer) -> Result<bool> {
    let params = cfg.params()?;
    let u0 = initial_field(cfg)?;
    let picard = PicardOptions { nodes: cfg.nodes, tol: cfg.tol, max_iter: cfg.max_iter, k: cfg.smoothing_k };
    let (samples, report, pass) = match cfg.mode {
        SolveMode::Picard => {
            let (traj, trace) = picard_solve(&u0, cfg.t_end, &params, &picard).map_err(numerical)?;
            let pass = trace.converged && trace.failure.is_none();
            (traj.samples(), json!({ "certificate": trace.certificate, "trace": trace }), pass)
        }
        SolveMode::Timestep => {
            let (samples, _, failure) = timestep_samples(&u0, cfg.t_end, cfg.dt, &params).map_err(numerical)?;
            let report = json!({ "steps": samples.len() - 1, "failure": failure });
            (samples, report, failure.is_none())
        }
        SolveMode::Continue => {
            let stop = match cfg.threshold {
                Some(value) => Stop::Threshold { kind: NormKind::L2, value, budget: cfg.t_end },
                None => Stop::Budget(cfg.t_end),
            };
            let policy = WindowPolicy { picard, ..Default::default() };
            let (traj, rep) = continue_until(&u0, &params, stop, &policy).map_err(numerical)?;
            let pass = matches!(rep.status, ContinuationStatus::BudgetReached | ContinuationStatus::ThresholdCrossed);
            (traj.samples(), serde_json::to_value(&rep)?, pass)
        }
    };
    let final_time = samples.last().map_or(0.0, |s| s.t);
    w.csv("trajectory.csv", &samples_to_csv(&samples))?;
    w.json(
        "solve.json",
        json!({
            "mode": cfg.mode,
            "pass": pass,
            "final_time": final_time,
            "samples": samples.len(),
            "report": report,
        }),
    )?;
    Ok(pass)
}

fn monitor(cfg: &RunConfig, w: &mut Writer) -> Result<bool> {
    let params = cfg.params()?;
    let path = cfg.input.as_ref().ok_or_else(|| anyhow!("monitor needs --input"))?;
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let samples = samples_from_csv(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let energy = if samples.len() >= 2 { Some(energy_ledger(&samples, params.nu).map_err(numerical)?) } else { None };
    let horizons = horizon_series(&samples, params.nu);
    let consistency = horizon_consistency(&samples, params.nu, cfg.gronwall_c, None);
    let fit = if cfg.fit {
        let u0_l2 = cfg.u0_l2.or(samples.first().map(|s| s.norms.l2)).unwrap_or(0.0);
        if params.sigma > 1.0 && u0_l2 > 0.0 {
            let ep = envelope_constants(u0_l2, &params).map_err(numerical)?;
            let t: Vec<f64> = samples.iter().map(|s| s.t).collect();
            let v: Vec<f64> = samples.iter().map(|s| s.norms.h1_gevrey).collect();
            Some(fit_profile(&t, &v, &ep, &params).map_err(numerical)?)
        } else {
            Some(ProfileFit::NoFit { reason: "needs sigma > 1 and a nonzero datum".into() })
        }
    } else {
        None
    };
    let pass = consistency.pass;
    let mut horizon_csv = String::from("t,l1_weighted,l1_plain,horizon_weighted,horizon_plain\n");
    for h in &horizons {
        horizon_csv.push_str(&format!(
            "{:e},{:e},{:e},{:e},{:e}\n",
            h.t, h.l1_weighted, h.l1_plain, h.horizon_weighted, h.horizon_plain
        ));
    }
    w.csv("horizons.csv", &horizon_csv)?;
    w.json(
        "diagnostics.json",
        json!({
            "pass": pass,
            "samples": samples.len(),
            "energy": energy,
            "horizon_consistency": consistency,
            "fit": fit,
        }),
    )?;
    Ok(pass)
}

fn constants(cfg: &RunConfig, w: &mut Writer) -> Result<bool> {
    let params = cfg.params()?;
    let u0_l2 = cfg.u0_l2.unwrap_or(1.0);
    let cas = c_a_sigma(cfg.a, cfg.sigma).map_err(numerical)?;
    let ep = envelope_constants(u0_l2, &params).map_err(numerical)?;
    let b = infimum_b(params.sigma0_twice()).map_err(numerical)?;
    w.json(
        "constants.json",
        json!({
            "a": cfg.a,
            "sigma": cfg.sigma,
            "nu": cfg.nu,
            "u0_l2": u0_l2,
            "c_delta_2": cdelta(2.0).map_err(numerical)?,
            "c_delta_limit": cdelta_limit(),
            "m2": m_bound(2.0).map_err(numerical)?,
            "c_a_sigma": {
                "c": cas.c(),
                "c_sq_quadrature": cas.c_sq,
                "c_sq_substitution": cas.c_sq_substitution,
                "c_sq_printed": cas.c_sq_printed,
                "matches_substitution": cas.matches_substitution,
                "matches_printed": cas.matches_printed,
                "b": cas.b,
            },
            "sigma0_twice": ep.sigma0_twice,
            "B": b,
            "C1": ep.c1_upper,
            "C2": ep.c2_upper,
            "C2_rederived": ep.c2_rederived,
            "c1": ep.c1,
            "c2": ep.c2,
        }),
    )?;
    Ok(true)
}

//! Command-line harness: configuration, run manifests and replay.

pub mod commands;
pub mod config;
pub mod manifest;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::Parser;
use serde_json::json;

use crate::commands::{execute, NumericalFailure};
use crate::config::{default_output_dir, Cli, CliCommand, Command, RunConfig};
use crate::manifest::{file_hash, read_manifest, run_hash, write_manifest, FileHash, Manifest, MANIFEST_FILE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const THREADS_ENV: &str = "GEVREY_NS_THREADS";

#[derive(Debug)]
pub struct RunResult {
    pub exit_code: i32,
    pub dir: PathBuf,
    pub manifest: Manifest,
}

fn init_threads() -> usize {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            // a second initialization in the same process is harmless
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    rayon::current_num_threads()
}

/// Runs a resolved config into `dir` and writes its manifest.
///
/// Usage-type problems (unreadable inputs, bad data files) come back as `Err`.
pub fn run(cfg: &RunConfig, dir: &Path) -> Result<RunResult> {
    let threads = init_threads();
    let started = chrono::Utc::now().to_rfc3339();
    let clock = Instant::now();
    let mut inputs = Vec::new();
    for p in cfg.inputs() {
        inputs.push(FileHash { sha256: file_hash(&p)?, path: p });
    }
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let hash = run_hash(cfg);
    let (exit_code, pass, artifacts) = match execute(cfg, dir, &hash) {
        Ok(out) => (if out.pass { EXIT_OK } else { EXIT_FAILED }, out.pass, out.artifacts),
        Err(e) if e.downcast_ref::<NumericalFailure>().is_some() => {
            let body = json!({ "run_hash": hash, "error": "numerical failure", "detail": e.to_string() });
            fs::write(dir.join("error.json"), serde_json::to_string_pretty(&body)? + "\n")?;
            (EXIT_FAILED, false, vec![PathBuf::from("error.json")])
        }
        Err(e) => return Err(e),
    };
    let mut hashes = Vec::new();
    for a in artifacts {
        hashes.push(FileHash { sha256: file_hash(&dir.join(&a))?, path: a });
    }
    let manifest = Manifest {
        tool: "gevrey-ns".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        run_hash: hash,
        config: RunConfig { output_dir: Some(dir.to_path_buf()), ..cfg.clone() },
        seeds: vec![cfg.seed],
        threads,
        started,
        wall_time_s: clock.elapsed().as_secs_f64(),
        exit_code,
        pass,
        inputs,
        artifacts: hashes,
    };
    write_manifest(dir, &manifest)?;
    Ok(RunResult { exit_code, dir: dir.to_path_buf(), manifest })
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ReplayReport {
    pub identical: bool,
    pub files: Vec<(PathBuf, bool)>,
    pub dir: PathBuf,
}

/// Re-runs the config recorded in a manifest and compares every artifact hash.
pub fn replay(manifest_path: &Path, output_dir: Option<PathBuf>) -> Result<ReplayReport> {
    let m = read_manifest(manifest_path)?;
    for input in &m.inputs {
        let h = file_hash(&input.path).with_context(|| format!("replay input {} is missing", input.path.display()))?;
        if h != input.sha256 {
            return Err(anyhow!("replay input {} has changed", input.path.display()));
        }
    }
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    let dir = output_dir.unwrap_or_else(|| {
        base.join(format!("replay-{}", chrono::Utc::now().format("%Y%m%dT%H%M%S%.3fZ")))
    });
    m.config.validate()?;
    let result = run(&m.config, &dir)?;
    let mut files = Vec::new();
    let mut identical = result.manifest.artifacts.len() == m.artifacts.len()
        && result.manifest.run_hash == m.run_hash;
    for a in &m.artifacts {
        let same = result.manifest.artifacts.iter().any(|b| b == a);
        identical &= same;
        files.push((a.path.clone(), same));
    }
    Ok(ReplayReport { identical, files, dir })
}

fn command_of(c: &CliCommand) -> Option<(Command, &config::Flags)> {
    match c {
        CliCommand::Verify(f) => Some((Command::Verify, f)),
        CliCommand::Solve(f) => Some((Command::Solve, f)),
        CliCommand::Monitor(f) => Some((Command::Monitor, f)),
        CliCommand::Constants(f) => Some((Command::Constants, f)),
        CliCommand::Replay(_) => None,
    }
}

/// Parses arguments, runs, and returns the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let CliCommand::Replay(r) = &cli.command {
        return match replay(&r.manifest, r.output_dir.clone()) {
            Ok(rep) => {
                for (f, same) in &rep.files {
                    println!("{} {}", if *same { "identical" } else { "differs" }, f.display());
                }
                println!("replay written to {}", rep.dir.display());
                if rep.identical {
                    EXIT_OK
                } else {
                    EXIT_FAILED
                }
            }
            Err(e) => {
                eprintln!("error: {e:#}");
                EXIT_USAGE
            }
        };
    }
    let (command, flags) = command_of(&cli.command).expect("replay handled above");
    let cfg = match RunConfig::resolve(command, flags) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return EXIT_USAGE;
        }
    };
    let dir = cfg.output_dir.clone().unwrap_or_else(default_output_dir);
    match run(&cfg, &dir) {
        Ok(r) => {
            println!("{} -> {}", command, r.dir.join(MANIFEST_FILE).display());
            println!("{}", if r.manifest.pass { "PASS" } else { "FAIL" });
            r.exit_code
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    }
}

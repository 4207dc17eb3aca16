use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use microlub_cli::format::fmt_g;
use microlub_cli::{run_potential, run_single, run_sweep, run_verify, RunConfig};

#[derive(Parser)]
#[command(name = "microlub", version, about = "Rough slider bearing with a micropolar lubricant")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single solve; writes pressure_<tag>.csv and appends to results.csv.
    Solve(Overrides),
    /// Sweep over the N and M lists; writes pressure_N*.csv and results_N*.csv.
    Sweep(Overrides),
    /// Oracle cross-checks, one PASS/FAIL line per invariant.
    Verify(Overrides),
    /// Dumps the potential psi for the configured M to psi_M<val>.csv.
    Potential(Overrides),
}

#[derive(Args)]
struct Overrides {
    /// Config file with `key = value` lines.
    #[arg(short, long)]
    config: Option<PathBuf>,
    #[arg(long = "N")]
    n: Option<f64>,
    #[arg(long = "M")]
    m: Option<f64>,
    #[arg(long)]
    n1: Option<usize>,
    #[arg(long = "nZ")]
    nz: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(short, long)]
    output_dir: Option<PathBuf>,
    /// Any other key, as `key=value`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Overrides {
    fn config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| anyhow::anyhow!("--set expects KEY=VALUE, got `{kv}`"))?;
            cfg.set(k.trim(), v.trim())?;
        }
        if let Some(v) = self.n {
            cfg.n = v;
        }
        if let Some(v) = self.m {
            cfg.m = v;
        }
        if let Some(v) = self.n1 {
            cfg.n1 = v;
        }
        if let Some(v) = self.nz {
            cfg.nz = v;
        }
        if let Some(v) = self.tol {
            cfg.tol = v;
        }
        if let Some(v) = self.max_iter {
            cfg.max_iter = v;
        }
        if let Some(v) = &self.output_dir {
            cfg.output_dir = v.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve(o) => {
            let cfg = o.config()?;
            let cell = run_single(&cfg)?;
            let r = &cell.report;
            println!(
                "N = {}, M = {}: p_max = {}, W = {}, F = {}, c_f = {}, iterations = {}",
                fmt_g(cell.n),
                fmt_g(cell.m),
                fmt_g(r.max_pressure()),
                fmt_g(r.load),
                fmt_g(r.friction),
                fmt_g(r.friction_coefficient),
                r.iterations
            );
            if !r.converged {
                eprintln!(
                    "not converged; stability: C = {}, C(1+beta) = {}, satisfied = {}",
                    fmt_g(r.stability.constant),
                    fmt_g(r.stability.condition_value),
                    r.stability.satisfied
                );
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep(o) => {
            let cfg = o.config()?;
            let out = run_sweep(&cfg)?;
            println!("N,M,W/W0,cf/cf0,p_max");
            for r in &out.rows {
                println!(
                    "{},{},{},{},{}",
                    fmt_g(r.n),
                    fmt_g(r.m),
                    fmt_g(r.load_rel),
                    fmt_g(r.friction_coefficient_rel),
                    fmt_g(r.max_pressure)
                );
            }
            for f in &out.failures {
                eprintln!("failed: {f}");
            }
            Ok(if out.failures.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::Verify(o) => {
            let cfg = o.config()?;
            let checks = run_verify(&cfg)?;
            for c in &checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            Ok(if checks.iter().all(|c| c.passed) { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Potential(o) => {
            let cfg = o.config()?;
            let m = cfg.roughness()?;
            let psi_bar = run_potential(&cfg, m)?;
            println!("M = {}: psi_bar = {}", fmt_g(m), fmt_g(psi_bar));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

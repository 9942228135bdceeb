//! Command-line interface: single-scenario solves, scheme-comparison
//! sweeps with CSV output, and geometry validation.
//!
//! Exit codes: 0 success, 1 infeasible problem or failed validation,
//! 2 configuration error.

use clap::{Parser, Subcommand};
use shotplan::config::{load_config, ConfigError, RunConfig};
use shotplan::solver::{bcd_solve, TerminationStatus};
use shotplan::sweep::{self, SweepRow};
use shotplan::validate::{validate_geometry, ORACLE_REL_TOL};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "shotplan", about = "UAV shooting-position planner", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the configured scenario with the alternating solver.
    Solve {
        #[arg(long)]
        config: PathBuf,
        /// Write the per-iteration trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Delay versus resolution requirement, per gamma0, all schemes.
    SweepResolution {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Delay versus BS-target distance, per resolution level, all schemes.
    SweepDistance {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check closed-form geometry against the corner-projection oracle and
    /// the segment restriction against a 3D grid search.
    ValidateGeometry {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run all three schemes on the configured scenario.
    Compare {
        #[arg(long)]
        config: PathBuf,
        /// Also write the comparison as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &PathBuf) -> Result<RunConfig, ConfigError> {
    load_config(path)
}

fn write_rows(rows: &[SweepRow], path: &PathBuf) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    sweep::write_csv(rows, &mut out)?;
    out.flush()
}

fn run() -> Result<ExitCode, Box<dyn std::error::Error>> {
    let cli = Cli::parse();
    match cli.command {
        Command::Solve { config, trace } => {
            let cfg = load(&config)?;
            let result = match bcd_solve(&cfg.scenario, &cfg.solver) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("infeasible: {e}");
                    return Ok(ExitCode::from(1));
                }
            };
            let p = &result.placement;
            println!("placement:  ({:.3}, {:.3}, {:.3}) m", p.q[0], p.q[1], p.z);
            println!("eta:        {:.6}", result.point.eta);
            println!("resolution: {:.6} (required {:.6})", result.resolution, cfg.scenario.i_min);
            println!("rate:       {:.3e} bps", result.rate);
            println!("delay:      {:.6} s", result.delay);
            println!(
                "iterations: {} ({})",
                result.trace.len() - 1,
                match result.status {
                    TerminationStatus::Converged => "converged",
                    TerminationStatus::MaxIters => "max iterations reached",
                    TerminationStatus::Infeasible => "infeasible",
                }
            );
            if let Some(path) = trace {
                let mut out = BufWriter::new(File::create(&path)?);
                writeln!(out, "iteration,eta,z,objective")?;
                for rec in &result.trace {
                    writeln!(out, "{},{:.9e},{:.9e},{:.9e}", rec.iteration, rec.eta, rec.z, rec.objective)?;
                }
                out.flush()?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::SweepResolution { config, out } => {
            let cfg = load(&config)?;
            let rows = sweep::sweep_resolution(&cfg);
            write_rows(&rows, &out)?;
            println!("wrote {} rows to {}", rows.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::SweepDistance { config, out } => {
            let cfg = load(&config)?;
            let rows = sweep::sweep_distance(&cfg);
            write_rows(&rows, &out)?;
            println!("wrote {} rows to {}", rows.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::ValidateGeometry { config, samples, seed } => {
            let cfg = load(&config)?;
            if samples == 0 {
                return Err(Box::new(ConfigError::Invalid("--samples must be >= 1".into())));
            }
            let report = match validate_geometry(&cfg.scenario, samples, seed, cfg.es_step_3d) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("validation failed: {e}");
                    return Ok(ExitCode::from(1));
                }
            };
            println!("samples:            {}", report.samples);
            println!("max area rel err:   {:.3e} (limit {:.0e})", report.max_area_err, ORACLE_REL_TOL);
            println!("max d1 rel err:     {:.3e} (limit {:.0e})", report.max_d1_err, ORACLE_REL_TOL);
            println!("max d2 rel err:     {:.3e} (limit {:.0e})", report.max_d2_err, ORACLE_REL_TOL);
            println!(
                "3D-search offset:   {:.3} m from the BS-target segment (limit {:.3} m at {} m step)",
                report.segment_distance, report.segment_threshold, report.es3d_step
            );
            if report.passed() {
                println!("validation: PASS");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("validation: FAIL");
                Ok(ExitCode::from(1))
            }
        }
        Command::Compare { config, out } => {
            let cfg = load(&config)?;
            let rows = sweep::compare(&cfg);
            println!("{:<14} {:>12} {:>12} {:>12} {:>10}", "scheme", "delay (s)", "rate (bps)", "resolution", "status");
            for r in &rows {
                println!(
                    "{:<14} {:>12.6} {:>12.4e} {:>12.6} {:>10}",
                    r.scheme, r.delay_s, r.rate_bps, r.resolution, r.status
                );
            }
            if let Some(path) = out {
                write_rows(&rows, &path)?;
            }
            if rows.iter().all(|r| r.status == "ok") {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
    }
}

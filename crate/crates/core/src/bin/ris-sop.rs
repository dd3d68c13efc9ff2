use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ris_sop::sweep::{self, RunOptions, SweepSpec};
use ris_sop::SopError;

/// Secrecy outage probability of opportunistic scheduling in RIS-aided downlinks.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a parameter sweep and write CSV.
    Sweep {
        /// Sweep document (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path; `-` writes to stdout.
        #[arg(long)]
        out: PathBuf,
        /// Monte Carlo trials per point (overrides the config).
        #[arg(long)]
        trials: Option<u64>,
        /// Monte Carlo seed (overrides the config).
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (does not change the output).
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Check a sweep document and print its canonical form.
    Validate {
        /// Sweep document (JSON).
        #[arg(long)]
        config: PathBuf,
    },
    /// Cross-check the closed form against quadrature at every grid point.
    Oracle {
        /// Sweep document (JSON).
        #[arg(long)]
        config: PathBuf,
    },
}

fn load(path: &PathBuf) -> Result<SweepSpec, SopError> {
    let text = std::fs::read_to_string(path).map_err(|e| SopError::Io(format!("{}: {e}", path.display())))?;
    sweep::parse_config(&text)
}

fn run(cli: Cli) -> Result<bool, SopError> {
    match cli.command {
        Command::Sweep { config, out, trials, seed, workers } => {
            let mut spec = load(&config)?;
            if let Some(t) = trials {
                spec.mc_trials = t;
            }
            if let Some(s) = seed {
                spec.seed = s;
            }
            let rows = sweep::run_sweep(&spec, RunOptions { workers })?;
            let csv = sweep::emit_csv(&rows);
            if out.as_os_str() == "-" {
                print!("{csv}");
            } else {
                std::fs::write(&out, csv).map_err(|e| SopError::Io(format!("{}: {e}", out.display())))?;
            }
            let mut ok = true;
            for r in rows.iter().filter(|r| !r.errors.is_empty()) {
                ok = false;
                let c = &r.config;
                eprintln!(
                    "row gamma0_db={} n_elements={} n_users={} scheme={}: {}",
                    c.gamma0_db,
                    c.n_elements,
                    c.n_users,
                    r.scheme.as_str(),
                    r.errors.join("; ")
                );
            }
            Ok(ok)
        }
        Command::Validate { config } => {
            let spec = load(&config)?;
            println!("{}", spec.to_json());
            Ok(true)
        }
        Command::Oracle { config } => {
            let checks = sweep::oracle_report(&load(&config)?)?;
            let failed = checks.iter().filter(|c| !c.pass).count();
            for c in &checks {
                println!("{c}");
            }
            println!("{} checks, {failed} failed", checks.len());
            Ok(failed == 0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

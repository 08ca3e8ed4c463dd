use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use courant_core::battery::DEFAULT_SEED;
use courant_core::Status;
use courant_lab::{catalog, emit_run, emit_verify, parse_spec_str, run_spec, to_toml, verify_all, Format, LabError, CHECKS, SEED_ENV};

#[derive(Parser)]
#[command(name = "courant-lab", version, about = "Exact checks for Dorfman connections, Dirac triples and Manin pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run checks on a structure spec (read from stdin when no path or `-` is given).
    Run {
        /// Comma-separated check names; defaults to the file's `[checks] run` list.
        #[arg(long, value_delimiter = ',')]
        check: Vec<String>,
        #[arg(long, env = SEED_ENV)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        spec: Option<PathBuf>,
    },
    /// Print a catalog entry as a spec, or list the entries.
    Catalog { name: Option<String> },
    /// Run every catalog entry and compare with its expected verdict.
    VerifyAll {
        #[arg(long, env = SEED_ENV)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// List check names and their anchors.
    Checks,
}

fn read_source(path: Option<&PathBuf>) -> Result<String, String> {
    match path {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display())),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| format!("cannot read stdin: {e}"))?;
            Ok(s)
        }
    }
}

fn usage_error(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("courant-lab: {message}");
    ExitCode::from(2)
}

fn verdict(status: Status) -> ExitCode {
    if status == Status::Pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { check, seed, format, spec } => {
            let source = match read_source(spec.as_ref()) {
                Ok(s) => s,
                Err(e) => return usage_error(e),
            };
            let parsed = match parse_spec_str(&source) {
                Ok(s) => s,
                Err(e) => return usage_error(e),
            };
            match run_spec(&parsed, Some(&source), &check, seed.unwrap_or(DEFAULT_SEED)) {
                Ok(out) => {
                    print!("{}", emit_run(&out, format));
                    verdict(out.status)
                }
                Err(e) => usage_error(e),
            }
        }
        Command::Catalog { name: None } => {
            let width = catalog::names().map(str::len).max().unwrap_or(0);
            for (name, description) in catalog::ENTRIES {
                println!("{name:width$}  {description}");
            }
            ExitCode::SUCCESS
        }
        Command::Catalog { name: Some(name) } => match catalog::catalog(&name) {
            Some(spec) => {
                print!("{}", to_toml(&spec));
                ExitCode::SUCCESS
            }
            None => usage_error(LabError::UnknownEntry(name)),
        },
        Command::VerifyAll { seed, format } => match verify_all(seed.unwrap_or(DEFAULT_SEED)) {
            Ok(out) => {
                print!("{}", emit_verify(&out, format));
                verdict(out.status)
            }
            Err(e) => usage_error(e),
        },
        Command::Checks => {
            let width = CHECKS.iter().map(|c| c.name.len()).max().unwrap_or(0);
            for c in CHECKS {
                println!("{:width$}  {}", c.name, c.anchor);
            }
            ExitCode::SUCCESS
        }
    }
}

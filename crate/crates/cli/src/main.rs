use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use hecke_core::export::{
    classes_export, cusps_export, ptable_export, table_export, ReportRow, SweepExport,
};
use hecke_core::field::is_prime;
use hecke_core::hecke::{sweep_verify, verify_hecke_identity};
use thiserror::Error;

mod args;
mod render;

use args::{Cli, Command, Format, OutputArgs};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

/// Accepts exactly the primes `q ≡ 3 (mod 4)` with `q > 3`.
fn validate_q(q: u64) -> Result<u64, CliError> {
    if q == 3 {
        return Err(CliError::Usage(
            "q = 3 is outside the supported range: the group is too small for the general argument, so only primes q >= 7 with q = 3 (mod 4) are accepted".into(),
        ));
    }
    if !is_prime(q) {
        return Err(CliError::Usage(format!(
            "q = {q} is not prime; q must be a prime with q = 3 (mod 4) and q > 3"
        )));
    }
    if q % 4 != 3 {
        return Err(CliError::Usage(format!(
            "q = {q} is {} (mod 4); only primes q = 3 (mod 4) with q > 3 are supported",
            q % 4
        )));
    }
    Ok(q)
}

fn emit(out: &OutputArgs, body: &str) -> Result<(), CliError> {
    match &out.output {
        Some(path) => write_file(path, body),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn write_file(path: &Path, body: &str) -> Result<(), CliError> {
    fs::write(path, body)?;
    Ok(())
}

fn compute<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Compute(e.to_string())
}

/// Runs one command and returns whether every verdict held.
fn run(command: Command) -> Result<bool, CliError> {
    match command {
        Command::Verify { q, out } => {
            let q = validate_q(q)?;
            let row = match verify_hecke_identity(q) {
                Ok(report) => ReportRow::from_report(&report, out.timing),
                Err(e) => ReportRow::from_entry(
                    &hecke_core::hecke::SweepEntry { q, outcome: Err(e) },
                    false,
                ),
            };
            emit(&out, &render::report(&row, out.format, out.timing)?)?;
            Ok(row.verdict)
        }
        Command::Sweep {
            min,
            max,
            workers,
            out,
        } => {
            if min > max {
                return Err(CliError::Usage(format!("--min {min} exceeds --max {max}")));
            }
            let workers = workers.map(|w| w as usize).unwrap_or_else(|| {
                std::thread::available_parallelism()
                    .map(|n| n.get())
                    .unwrap_or(1)
            });
            let entries = sweep_verify(min, max, workers);
            let sweep = SweepExport::new(min, max, &entries, out.timing);
            emit(&out, &render::sweep(&sweep, out.format, out.timing)?)?;
            if out.format != Format::Text || out.output.is_some() {
                eprintln!("{}", render::summary_line(&sweep));
            }
            Ok(sweep.summary.failures == 0)
        }
        Command::Table {
            q,
            exact_ceiling,
            out,
        } => {
            let t = table_export(validate_q(q)?, exact_ceiling).map_err(compute)?;
            if t.mode == "numeric" && out.format == Format::Text && out.output.is_none() {
                eprintln!(
                    "conductor {} exceeds --exact-ceiling {exact_ceiling}; values are floating point",
                    t.conductor
                );
            }
            emit(&out, &render::table(&t, out.format)?)?;
            Ok(true)
        }
        Command::Classes { q, out } => {
            let c = classes_export(validate_q(q)?).map_err(compute)?;
            emit(&out, &render::classes(&c, out.format)?)?;
            Ok(true)
        }
        Command::Cusps { q, out } => {
            let c = cusps_export(validate_q(q)?).map_err(compute)?;
            emit(&out, &render::cusps(&c, out.format)?)?;
            Ok(true)
        }
        Command::Ptable { q, out } => {
            let p = ptable_export(validate_q(q)?).map_err(compute)?;
            emit(&out, &render::ptable(&p, out.format)?)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_validation() {
        assert_eq!(validate_q(23).unwrap(), 23);
        for bad in [1, 2, 3, 5, 13, 15, 21] {
            assert_eq!(validate_q(bad).unwrap_err().exit_code(), 2, "q = {bad}");
        }
        assert!(validate_q(13)
            .unwrap_err()
            .to_string()
            .contains("3 (mod 4)"));
    }

    #[test]
    fn failing_sweep_maps_to_exit_one() {
        // 13 is filtered out, so an empty sweep is vacuously fine
        let ok = run(Command::Sweep {
            min: 13,
            max: 13,
            workers: Some(1),
            out: OutputArgs {
                format: Format::Json,
                output: Some(std::env::temp_dir().join("hecke-empty-sweep.json")),
                timing: false,
            },
        })
        .unwrap();
        assert!(ok);
        assert_eq!(CliError::Compute("x".into()).exit_code(), 1);
    }
}

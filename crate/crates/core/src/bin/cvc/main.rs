//! `cvc`: solve, reduce, verify, generate and benchmark Capacitated Vertex
//! Cover instances.
//!
//! Exit codes: 0 for success or "yes", 1 for "no" or a failed check, 2 for
//! any error.

mod bench;
mod gen;
mod reduce;
mod solve;
mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cvc_core::Result;

#[derive(Parser)]
#[command(name = "cvc", version, about = "Capacitated Vertex Cover toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimum size, or a yes/no answer with --k.
    Solve(solve::SolveArgs),
    /// Build a CVC instance from a source problem.
    Reduce(reduce::ReduceArgs),
    /// Check a certificate or side artifact.
    Verify(verify::VerifyArgs),
    /// Write a seeded random instance.
    Gen(gen::GenArgs),
    /// Instrumented cutwidth DP runs on the layered family.
    Bench(bench::BenchArgs),
}

pub(crate) fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        std::io::Error::new(e.kind(), format!("{}: {e}", path.display())).into()
    })
}

/// Writes to `path`, or to stdout when absent.
pub(crate) fn write_out(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| {
            std::io::Error::new(e.kind(), format!("{}: {e}", p.display())).into()
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(a) => solve::run(a),
        Command::Reduce(a) => reduce::run(a),
        Command::Verify(a) => verify::run(a),
        Command::Gen(a) => gen::run(a),
        Command::Bench(a) => bench::run(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

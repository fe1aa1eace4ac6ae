use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use torpure::cli::{self, CliError, Command, CommandOptions};

/// Exact-arithmetic toolkit for fans, class groups and Picard lattices of
/// Q-factorial complete toric varieties.
#[derive(Parser)]
#[command(name = "torpure", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args)]
struct Common {
    /// Input document (JSON: n, rays, fans, optional overrides).
    file: PathBuf,
    /// Name of a fan declared in the document.
    #[arg(long)]
    fan: Option<String>,
    /// Use the document's weight/torsion matrix overrides instead of the
    /// canonical basis, so outputs match a reference computation verbatim.
    #[arg(long)]
    paper_basis: bool,
    /// Emit the machine-readable JSON report instead of text.
    #[arg(long)]
    json: bool,
    /// Worker budget for enumeration; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Sub {
    /// Check fan-matrix invariants and fan validity/completeness.
    Validate(Common),
    /// Class group presentation: rank, torsion, weight and torsion matrices.
    Classgroup(Common),
    /// Basis of the lattice of torus-invariant Cartier divisors.
    Cartier(Common),
    /// Generators of the Picard subgroup inside the class group.
    Picard(Common),
    /// Purity verdict with its decision path and witnesses.
    Purity(Common),
    /// Cone multiplicities on the input and on its universal covering.
    Mult(Common),
    /// Enumerate all complete simplicial fans on the ray set.
    Enumerate(Common),
    /// Complete the named fan without adding rays, when possible.
    Complete(Common),
}

fn main() -> ExitCode {
    let parsed = Cli::parse();
    let (command, common) = match &parsed.command {
        Sub::Validate(c) => (Command::Validate, c),
        Sub::Classgroup(c) => (Command::ClassGroup, c),
        Sub::Cartier(c) => (Command::Cartier, c),
        Sub::Picard(c) => (Command::Picard, c),
        Sub::Purity(c) => (Command::Purity, c),
        Sub::Mult(c) => (Command::Mult, c),
        Sub::Enumerate(c) => (Command::Enumerate, c),
        Sub::Complete(c) => (Command::Complete, c),
    };
    if common.jobs == 0 {
        eprintln!("error: --jobs must be at least 1");
        return ExitCode::from(2);
    }
    let text = match std::fs::read_to_string(&common.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", common.file.display());
            return ExitCode::from(2);
        }
    };
    let doc = match cli::parse_document(&text) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let opts = CommandOptions {
        fan: common.fan.clone(),
        paper_basis: common.paper_basis,
        jobs: common.jobs,
    };
    match cli::run(command, &doc, &opts) {
        Ok(report) => {
            if common.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", cli::render_text(&report));
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e @ CliError::Input(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e @ CliError::Validation(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}

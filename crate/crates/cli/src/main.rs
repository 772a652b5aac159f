use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

mod gens;
mod run;

#[derive(Parser, Debug)]
#[command(name = "tau2", version, about = "Higher tau-tilting computations over bound quiver algebras")]
pub struct Cli {
    /// Algebra spec file.
    pub spec: PathBuf,
    #[command(flatten)]
    pub config: Config,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Config {
    /// Override the field characteristic of the spec.
    #[arg(long, global = true)]
    pub field: Option<u32>,
    /// Knitting limit on the number of indecomposables.
    #[arg(long, global = true, default_value_t = 200)]
    pub max_indec: usize,
    /// Knitting limit on the total dimension of an indecomposable.
    #[arg(long, global = true, default_value_t = 32)]
    pub max_dim: usize,
    /// Largest number of objects whose subsets are scanned.
    #[arg(long, global = true, default_value_t = 20)]
    pub budget: usize,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomized fallbacks (none currently consume it).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dimension, vertices and global dimension.
    Info {
        #[arg(long)]
        echo_spec: bool,
    },
    /// Indecomposables by knitting.
    Indecs {
        /// Cross-check against brute-force enumeration.
        #[arg(long)]
        oracle: bool,
        /// Per-vertex dimension bound for the oracle.
        #[arg(long, default_value_t = 1)]
        bound: usize,
    },
    /// Auslander-Reiten quiver.
    Ar {
        #[arg(long)]
        dot: bool,
    },
    /// Scan for d-cluster-tilting subcategories.
    Ctfind {
        #[arg(long, default_value_t = 2)]
        d: usize,
    },
    /// Check whether add of the generators is d-cluster-tilting.
    Ctcheck {
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        gens: Vec<String>,
        #[arg(long, default_value_t = 2)]
        d: usize,
    },
    /// 2-functorially finite torsion pairs.
    Torsion {
        #[command(subcommand)]
        action: Enum,
    },
    /// Support tau_2-tilting modules.
    Tau2 {
        #[command(subcommand)]
        action: Enum,
    },
    /// Correspondence checks.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Single-module utilities.
    Module {
        #[command(subcommand)]
        action: ModuleCmd,
    },
}

#[derive(Subcommand, Debug)]
pub enum Enum {
    /// Enumerate inside add of the generators.
    Enum {
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        ct: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// Support tau_2-tilting modules against 2-functorially finite torsion pairs.
    Theorem1 {
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        ct: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum ModuleCmd {
    /// Split a module (JSON file) into indecomposables.
    Decompose { file: PathBuf },
}

/// What a command produced: a document and whether it carries a
/// falsification witness.
pub struct Outcome {
    pub body: String,
    pub falsified: bool,
}

pub struct Failure {
    pub code: u8,
    pub error: &'static str,
    pub detail: String,
}

impl Failure {
    pub fn usage(detail: impl Into<String>) -> Failure {
        Failure {
            code: 4,
            error: "USAGE",
            detail: detail.into(),
        }
    }

    fn render(&self) -> String {
        pretty(&json!({"error": self.error, "detail": self.detail}))
    }
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{}", Failure::usage(e.to_string().trim_end()).render());
            return ExitCode::from(4);
        }
    };
    let out = cli.config.out.clone();
    match run::run(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(out.as_ref(), &outcome.body) {
                eprint!("{}", e.render());
                return ExitCode::from(e.code);
            }
            ExitCode::from(if outcome.falsified { 2 } else { 0 })
        }
        Err(f) => {
            eprint!("{}", f.render());
            ExitCode::from(f.code)
        }
    }
}

fn emit(out: Option<&PathBuf>, body: &str) -> Result<(), Failure> {
    match out {
        None => {
            print!("{body}");
            Ok(())
        }
        Some(path) => std::fs::write(path, body).map_err(|e| Failure {
            code: 1,
            error: "IO",
            detail: format!("{}: {e}", path.display()),
        }),
    }
}

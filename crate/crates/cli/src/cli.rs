//! Argument parsing and output.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::commands::{run_command, Command, Options};
use crate::spec::parse_spec;

/// Exit status when every check passed.
pub const EXIT_PASS: i32 = 0;
/// Exit status when a check failed or a module raised an error.
pub const EXIT_FAIL: i32 = 1;
/// Exit status for unusable arguments or model files.
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Exact averaging and verification of Poisson and Dirac structures.
#[derive(Debug, Parser)]
#[command(name = "poisson-avg", version)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Model file.
    #[arg(long)]
    pub spec: PathBuf,
    /// Sample box from the model; the first one by default.
    #[arg(long = "box")]
    pub box_name: Option<String>,
    /// Sample points for pointwise checks, or trajectories for the flow.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Overrides the model's seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Integrator steps on [0, 1].
    #[arg(long)]
    pub steps: Option<usize>,
    /// Writes the report as JSON.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Writes the model a command produces.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Standard output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Runs one invocation and returns the exit status.
pub fn run(cli: &Cli) -> i32 {
    let model = match parse_spec(&cli.spec) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_USAGE;
        }
    };
    let opts = Options { box_name: cli.box_name.clone(), samples: cli.samples, seed: cli.seed, steps: cli.steps };
    let report = match run_command(cli.command, &model, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let text = match cli.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    };
    let _ = std::io::stdout().write_all(text.as_bytes());
    let mut writes = Vec::new();
    if let Some(p) = &cli.report {
        writes.push(write_file(p, &report.to_json()));
    }
    if let Some(p) = &cli.output {
        match &report.output {
            Some(spec) => writes.push(write_file(p, &spec.to_json())),
            None => writes.push(Err(format!("{} produces no model", report.command))),
        }
    }
    for w in writes {
        if let Err(e) = w {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    }
    if report.passed {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

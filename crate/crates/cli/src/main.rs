mod commands;
mod dot;
mod schema;
mod selftest;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dsquiver_core::sigma::DEFAULT_MAX_NODES;

/// Exit codes: 0 success or solvable, 1 unsolvable or a failed check,
/// 2 invalid input, 3 search cap exceeded.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("search cap of {0} nodes exceeded")]
    Cap(u64),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Cap(_) => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

pub struct Output {
    pub body: String,
    pub code: u8,
}

#[derive(Parser)]
#[command(name = "dsquiver", version, about = "Quivers and solvability for additive Deligne-Simpson problems")]
struct Args {
    #[command(subcommand)]
    command: Command,

    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,

    /// Node budget for the decomposition search.
    #[arg(long, default_value_t = DEFAULT_MAX_NODES, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_nodes: u64,

    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,

    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the quiver, dimension vector and parameter of an instance.
    Quiver { instance: PathBuf },
    /// Decide solvability; exit 0 solvable, 1 not solvable, 3 cap exceeded.
    Check { instance: PathBuf },
    /// Middle convolution of a tuple at a multi-index.
    Mc {
        tuple: PathBuf,
        #[arg(long)]
        instance: PathBuf,
        /// One 1-based block per pole, comma separated; all ones by default.
        #[arg(long)]
        index: Option<String>,
        /// Also write the predicted spectral data of the output.
        #[arg(long)]
        predicted: Option<PathBuf>,
    },
    /// Check a tuple against an instance.
    Verify {
        tuple: PathBuf,
        #[arg(long)]
        instance: PathBuf,
    },
    /// Run a seeded battery of random end-to-end checks.
    Selftest {
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, body: &str) -> Result<(), CliError> {
    fs::write(path, body).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

fn dispatch(args: &Args) -> Result<Output, CliError> {
    let out = match &args.command {
        Command::Quiver { instance } => commands::quiver(&read(instance)?, args.format)?,
        Command::Check { instance } => commands::check(&read(instance)?, args.format, args.max_nodes)?,
        Command::Mc { tuple, instance, index, predicted } => {
            let res = commands::mc(&read(tuple)?, &read(instance)?, index.as_deref(), args.format, args.output.is_some())?;
            if let Some(p) = predicted {
                let doc = res
                    .predicted
                    .as_ref()
                    .ok_or_else(|| CliError::Input("no predicted spectral data for an empty output".into()))?;
                write(p, &to_json(doc))?;
            }
            // with --output the tuple goes to the file and the report to stdout
            if let Some(path) = &args.output {
                write(path, &to_json(&res.tuple))?;
                return Ok(res.output);
            }
            res.output
        }
        Command::Verify { tuple, instance } => commands::verify(&read(tuple)?, &read(instance)?, args.format)?,
        Command::Selftest { count } => {
            let report = selftest::selftest(args.seed, *count, args.max_nodes);
            let body = match args.format {
                Format::Json => to_json(&report),
                Format::Text => report
                    .checks
                    .iter()
                    .map(|c| format!("{}: {}/{} passed\n", c.name, c.cases - c.failures.len(), c.cases))
                    .collect(),
                Format::Dot => return Err(CliError::Input("selftest has no dot output".into())),
            };
            Output { body, code: if report.passed { 0 } else { 1 } }
        }
    };
    if let Some(path) = &args.output {
        write(path, &out.body)?;
        return Ok(Output { body: String::new(), code: out.code });
    }
    Ok(out)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match dispatch(&args) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.body.as_bytes());
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("dsquiver: {e}");
            ExitCode::from(e.code())
        }
    }
}

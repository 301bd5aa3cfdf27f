use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lcrec_cli::error::read_file;
use lcrec_cli::{cone, samples, text, AnalyzeOptions, CliError, CliResult};
use lcrec_core::ell::{self, DEFAULT_DEPTH, DEFAULT_HORIZON};
use lcrec_core::rational::parse_rational;
use lcrec_core::{Rational, RecurrenceSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "lcrec", version, about = "Log-concavity of linear recurrences with coefficients linear in n")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Number of L iterates the oracle examines.
    #[arg(long, global = true, default_value_t = DEFAULT_DEPTH)]
    depth: usize,

    /// Last index generated.
    #[arg(long, global = true, default_value_t = DEFAULT_HORIZON)]
    horizon: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Evaluate independent criteria (or grid rows) concurrently.
    #[arg(long, global = true)]
    parallel: bool,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    match parse_rational(s.trim()) {
        Some(Ok(r)) => Ok(r),
        Some(Err(e)) => Err(e.to_string()),
        None => Err(format!("'{s}' is not an integer or p/q")),
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List a_0 ..= a_N.
    Generate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        up_to: usize,
    },
    /// Run every applicable criterion and the oracle.
    Analyze {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Dump every L iterate on the examined window.
    Oracle {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Write the (a, b, in_cone, S) grid for a_{n+1} = alpha a_n + beta a_{n-1}.
    Cone {
        #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
        alpha: Rational,
        #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
        beta: Rational,
        /// Range for both a and b, as lo:hi.
        #[arg(long, allow_hyphen_values = true, default_value = "-3:3")]
        range: String,
        #[arg(long, value_parser = rational_arg, default_value = "1")]
        step: Rational,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fixed-point residuals of a sampled window.
    Fixed {
        #[arg(long)]
        samples: PathBuf,
        /// Acceptance tolerance for the direct defect.
        #[arg(long, default_value = "1e-9")]
        tolerance: String,
    },
}

fn emit<T: serde::Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) -> CliResult<String> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(value)? + "\n",
        Format::Text => text(),
    })
}

fn run(cli: Cli) -> CliResult<String> {
    let opts = AnalyzeOptions { depth: cli.depth, horizon: cli.horizon, parallel: cli.parallel };
    match cli.command {
        Command::Generate { spec, up_to } => {
            let spec = RecurrenceSpec::parse(&read_file(&spec)?)?;
            let w = spec.generate(up_to)?;
            emit(cli.format, &text::term_rows(&w), || text::terms(&w))
        }
        Command::Analyze { spec } => {
            let report = lcrec_cli::analyze_text(&read_file(&spec)?, opts)?;
            emit(cli.format, &report, || text::analysis(&report))
        }
        Command::Oracle { spec } => {
            let spec = RecurrenceSpec::parse(&read_file(&spec)?)?;
            let report = ell::oracle(&spec, cli.depth, cli.horizon)?;
            emit(cli.format, &report, || text::oracle(&report))
        }
        Command::Cone { alpha, beta, range, step, out } => {
            let range = cone::parse_range(&range)?;
            let body = cone::render(&cone::grid(&alpha, &beta, &range, &step, cli.parallel)?);
            match out {
                Some(path) => {
                    std::fs::write(&path, body)
                        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                    Ok(String::new())
                }
                None => Ok(body),
            }
        }
        Command::Fixed { samples: path, tolerance } => {
            let window = samples::parse_samples(&read_file(&path)?)?;
            let tol = samples::parse_tolerance(&tolerance)?;
            let report = samples::fixed_report(&window, &tol)?;
            emit(cli.format, &report, || text::fixed(&report))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            let _ = std::io::stdout().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("lcrec: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

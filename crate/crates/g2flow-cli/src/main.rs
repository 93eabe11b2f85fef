//! The `g2flow` binary: exact verification suites, parameter solving, and
//! golden-table regeneration for Laplacian flow and coflow solutions of
//! locally conformal parallel G2-structures on rank-one solvable extensions
//! of nilpotent Lie groups.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage error (unknown
//! algebra, suite, or malformed rational), 3 I/O failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};

use g2flow::liealg::{find_algebra, load_catalog};
use g2flow::scalar::Rational;
use g2flow_cli::{reports, solve, verify};

#[derive(Parser)]
#[command(
    name = "g2flow",
    version,
    about = "Exact verification of Laplacian flow and coflow solutions for \
             locally conformal parallel G2-structures on rank-one solvable \
             Lie groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Output format selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and print one check per (algebra, suite).
    Verify {
        /// Catalog algebra name, or "all".
        #[arg(long, default_value = "all")]
        algebra: String,
        /// Suite: flow, coflow, lcp, soliton, curvature, lemma, examples,
        /// or "all".
        #[arg(long, default_value = "all")]
        what: String,
        /// Report format.
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the report to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Extra sample time for numeric-mode fixtures (rational, e.g. 1/4).
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
    },
    /// Print the exact flow and coflow parameters of one algebra.
    Solve {
        /// Catalog algebra name.
        algebra: String,
        /// Bracket scale for numeric sampling (rational, default 1).
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        m: String,
        /// Sample time: also print numeric coframe values at (m, t).
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        /// Output format.
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the output to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate the golden data tables.
    Report {
        /// Regenerate every table (required).
        #[arg(long)]
        all: bool,
        /// Output directory.
        #[arg(long, default_value = "reports")]
        out: PathBuf,
    },
}

/// A failure with its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

fn parse_rational(text: &str, flag: &str) -> Result<Rational, Failure> {
    Rational::from_str(text)
        .map_err(|_| Failure::new(2, format!("--{flag} expects a rational like 3 or -1/4, got '{text}'")))
}

/// Prints to stdout or writes to a file.
fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::new(3, format!("writing {}: {e}", path.display()))),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let catalog = load_catalog().map_err(|e| Failure::new(2, format!("catalog: {e}")))?;
    match cli.command {
        Command::Verify { algebra, what, format, out, t } => {
            let t = t.map(|text| parse_rational(&text, "t")).transpose()?;
            let plan = verify::expand_plan(&catalog, &algebra, &what)
                .map_err(|e| Failure::new(2, e))?;
            let report = verify::run_plan(&plan, t.as_ref());
            let text = match format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            };
            emit(&text, out.as_deref())?;
            if report.all_pass() {
                Ok(())
            } else {
                Err(Failure::new(1, String::new()))
            }
        }
        Command::Solve { algebra, m, t, format, out } => {
            let spec = find_algebra(&catalog, &algebra)
                .map_err(|e| Failure::new(2, e.to_string()))?;
            let m = parse_rational(&m, "m")?;
            let t = t.map(|text| parse_rational(&text, "t")).transpose()?;
            let output = solve::solve(spec, &m, t.as_ref()).map_err(|e| Failure::new(2, e))?;
            let text = match format {
                Format::Text => output.to_text(),
                Format::Json => output.to_json(),
                Format::Csv => output.to_csv(),
            };
            emit(&text, out.as_deref())
        }
        Command::Report { all, out } => {
            if !all {
                return Err(Failure::new(2, "report requires --all"));
            }
            let written = reports::write_all(&catalog, &out).map_err(|e| match e {
                reports::ReportError::Generate(msg) => Failure::new(1, msg),
                reports::ReportError::Io(io) => Failure::new(3, io.to_string()),
            })?;
            for path in written {
                println!("wrote {}", path.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            if !failure.message.is_empty() {
                eprintln!("error: {}", failure.message);
            }
            ExitCode::from(failure.code)
        }
    }
}

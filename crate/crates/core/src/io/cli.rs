//! The `cokahler` command line.
//!
//! Exit codes: 0 success, 1 validation or verification failure (including
//! unreadable or invalid documents), 2 usage error. Reports go to `out`,
//! diagnostics to `err`; nothing is written to `out` on failure.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use super::document::load_document;
use super::report::{self, ProductKind};
use crate::einstein_search::{multi_start, FamilyKind, SearchConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "cokahler",
    version,
    about = "Curvature and almost contact geometry of Lie algebras with left-invariant metrics"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Tolerance for every identity and classification check.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized steps (search starts).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Diag,
    Full,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check d^2 = 0, the metric and the forms of a document.
    Validate { file: PathBuf },
    /// Full curvature and almost contact report.
    Analyze { file: PathBuf },
    /// Classify (alpha, omega, g).
    Classify { file: PathBuf },
    /// Almost Kähler product M x S^1 or M x M.
    Product {
        file: PathBuf,
        #[arg(long, conflicts_with = "square", required_unless_present = "square")]
        with_circle: bool,
        #[arg(long)]
        square: bool,
    },
    /// Multi-start search for an Einstein metric on the document's algebra.
    Search {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Family::Diag)]
        family: Family,
        #[arg(long, default_value_t = 8)]
        seeds: usize,
    },
    /// Einstein check and the Einstein identities for the document's metric.
    Verify { file: PathBuf },
}

fn emit<T: Serialize>(out: &mut dyn Write, format: Format, report: &T) -> std::io::Result<()> {
    let text = match format {
        Format::Json => report::to_json(report),
        Format::Text => report::to_text(report),
    };
    out.write_all(text.as_bytes())
}

/// Runs the tool on `argv` (including the program name).
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let g = &cli.global;
    if !(g.tolerance > 0.0) {
        let _ = writeln!(err, "error: --tolerance must be positive");
        return EXIT_USAGE;
    }
    match execute(&cli, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, String> {
    let g = &cli.global;
    let tol = g.tolerance;
    let load = |file: &PathBuf| load_document(file, tol).map_err(|e| e.to_string());
    let io = |e: std::io::Error| e.to_string();
    match &cli.command {
        Command::Validate { file } => {
            let doc = load(file)?;
            emit(out, g.format, &report::validate_report(&doc, tol)).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Analyze { file } => {
            let doc = load(file)?;
            let r = report::analysis_report(&doc, tol).map_err(|e| e.to_string())?;
            emit(out, g.format, &r).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Classify { file } => {
            let doc = load(file)?;
            let r = report::classify_report(&doc, tol).map_err(|e| e.to_string())?;
            emit(out, g.format, &r).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Product { file, square, .. } => {
            let doc = load(file)?;
            let kind = if *square { ProductKind::Square } else { ProductKind::WithCircle };
            let r = report::product_report(&doc, kind, tol).map_err(|e| e.to_string())?;
            emit(out, g.format, &r).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Search { file, family, seeds } => {
            let doc = load(file)?;
            let family = match family {
                Family::Diag => FamilyKind::Diagonal,
                Family::Full => FamilyKind::FullTriangular,
            };
            let config = SearchConfig {
                seed: g.seed,
                starts: *seeds,
                ..SearchConfig::default()
            };
            let multi = multi_start(&doc.algebra, family, &config).map_err(|e| e.to_string())?;
            let r = report::search_report(&doc, family, &multi, g.seed, config.residual_tolerance, tol)
                .map_err(|e| e.to_string())?;
            emit(out, g.format, &r).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Verify { file } => {
            let doc = load(file)?;
            let r = report::verify_report(&doc, tol).map_err(|e| e.to_string())?;
            emit(out, g.format, &r).map_err(io)?;
            Ok(if r.passed { EXIT_OK } else { EXIT_FAILURE })
        }
    }
}

//! Library half of the `ltrio` command: configuration, suite orchestration
//! and report emission.

pub mod config;
pub mod emit;
pub mod run;
pub mod table;

use std::path::{Path, PathBuf};

use leonard_trio::suites::Mode;
use leonard_trio::Error;

use config::{Format, ParamLiteral, RunConfig};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_EXHAUSTED: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("genericity exhausted: {0}")]
    Exhausted(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("evaluation failed: {0}")]
    Evaluation(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => EXIT_CONFIG,
            CliError::Exhausted(_) => EXIT_EXHAUSTED,
            CliError::Evaluation(_) => EXIT_FAILURE,
        }
    }
}

/// Where a rendered document goes. Relative paths and the default file
/// name are placed under `report_dir` when it is set.
pub fn resolve_output(
    explicit: Option<&Path>,
    report_dir: Option<&Path>,
    format: Format,
) -> Option<PathBuf> {
    match (explicit, report_dir) {
        (Some(p), Some(dir)) if p.is_relative() => Some(dir.join(p)),
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(dir)) => Some(dir.join(format!("ltrio-report.{}", format.extension()))),
        (None, None) => None,
    }
}

fn format_from_path(path: &Path) -> Option<Format> {
    path.extension()
        .and_then(|e| e.to_str())
        .and_then(|e| Format::parse(e).ok())
}

pub fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)
                    .map_err(|e| CliError::Io(format!("{}: {e}", parent.display())))?;
            }
            std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub struct VerifyArgs<'a> {
    pub config: Option<&'a Path>,
    pub mode: Option<&'a str>,
    pub out: Option<&'a Path>,
    pub format: Option<&'a str>,
    pub report_dir: Option<&'a Path>,
}

/// Runs `verify` and returns the exit code.
pub fn verify(args: &VerifyArgs) -> Result<u8, CliError> {
    let cfg = match args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            RunConfig::from_json(&text)?
        }
        None => RunConfig::bundled(),
    };
    let mode: Mode = match args.mode {
        Some(m) => m
            .parse()
            .map_err(|e: Error| CliError::Config(e.to_string()))?,
        None => cfg.mode()?,
    };
    let out = args.out.or(cfg.output.path.as_deref());
    let format = match args.format {
        Some(f) => Format::parse(f)?,
        None => cfg
            .output
            .format
            .or_else(|| out.and_then(format_from_path))
            .unwrap_or(Format::Json),
    };
    let outcome = run::run(&cfg, mode)?;
    let text = emit::render(&outcome, format)?;
    write_output(
        resolve_output(out, args.report_dir, format).as_deref(),
        &text,
    )?;
    log::info!("{} checks, {} failures", outcome.checks, outcome.failures);
    Ok(if outcome.passed {
        EXIT_PASS
    } else {
        EXIT_FAILURE
    })
}

pub struct TableArgs<'a> {
    pub function: &'a str,
    pub params: &'a Path,
    pub out: Option<&'a Path>,
    pub mode: Option<&'a str>,
    pub report_dir: Option<&'a Path>,
}

pub fn table(args: &TableArgs) -> Result<u8, CliError> {
    let family: table::Family = args.function.parse()?;
    let text = std::fs::read_to_string(args.params)
        .map_err(|e| CliError::Config(format!("{}: {e}", args.params.display())))?;
    let lit: ParamLiteral =
        serde_json::from_str(&text).map_err(|e| CliError::Config(e.to_string()))?;
    let ps = lit.build().map_err(|e| CliError::Config(e.to_string()))?;
    let mode: Mode = match args.mode {
        Some(m) => m
            .parse()
            .map_err(|e: Error| CliError::Config(e.to_string()))?,
        None => Mode::Exact,
    };
    let grid = table::evaluate(family, &ps).map_err(CliError::Evaluation)?;
    let csv = table::render_csv(&grid, mode)?;
    write_output(
        resolve_output(args.out, args.report_dir, Format::Csv).as_deref(),
        &csv,
    )?;
    Ok(EXIT_PASS)
}

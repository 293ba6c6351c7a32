use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ltrio::{TableArgs, VerifyArgs};

#[derive(Parser)]
#[command(
    name = "ltrio",
    version,
    about = "Exact verification of Leonard trio identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites over a parameter battery.
    Verify {
        /// JSON run config; the bundled default is used when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// `exact` or `float:<bits>`; overrides the config.
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// json, csv or md.
        #[arg(long)]
        format: Option<String>,
    },
    /// Emit an (n, x) value table as CSV.
    Table {
        /// qracah, wilson, w, w-partner, r1, r1-sum, h1 or r3.
        #[arg(long = "fn")]
        function: String,
        /// JSON parameter set {q, alpha, beta, delta, s, N}.
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print values exactly (default) or rounded, as `float:<bits>`.
        #[arg(long)]
        mode: Option<String>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let report_dir = std::env::var_os("REPORT_DIR").map(PathBuf::from);
    let result = match &cli.command {
        Command::Verify {
            config,
            mode,
            out,
            format,
        } => ltrio::verify(&VerifyArgs {
            config: config.as_deref(),
            mode: mode.as_deref(),
            out: out.as_deref(),
            format: format.as_deref(),
            report_dir: report_dir.as_deref(),
        }),
        Command::Table {
            function,
            params,
            out,
            mode,
        } => ltrio::table(&TableArgs {
            function,
            params,
            out: out.as_deref(),
            mode: mode.as_deref(),
            report_dir: report_dir.as_deref(),
        }),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("ltrio: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

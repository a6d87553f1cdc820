//! Library side of the `mvb` command-line tool: CSV ingestion, the run
//! configuration, and command dispatch.

pub mod args;
mod commands;
pub mod config;
pub mod error;
pub mod ingest;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use commands::run;
pub use config::{Command, Format, RunConfig, SolverOptions};
pub use error::{CliError, CliResult};
pub use ingest::{ingest_csv, ingest_reader};

/// Parses `argv`, runs the command and returns the process exit status.
/// Errors are reported on `err` as a single `ERROR:<code>:<message>` line.
pub fn main_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return 0;
            }
            // Clap's message spans several lines; keep the part before the
            // usage synopsis on one line.
            let rendered = e.render().to_string();
            let summary: Vec<&str> = rendered
                .lines()
                .map(str::trim)
                .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
                .filter(|l| !l.is_empty())
                .collect();
            let msg = summary.join(" ");
            let msg = msg.trim_start_matches("error: ");
            let _ = writeln!(err, "ERROR:usage:{msg}");
            return 1;
        }
    };

    if let Some(n) = cli.threads {
        if n == 0 {
            let _ = writeln!(err, "ERROR:usage:--threads must be at least 1");
            return 1;
        }
        // Fails only if the pool was already built, as in repeated in-process calls.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }

    let result = cli.into_config().and_then(|config| run(&config, out));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "{}", e.report_line());
            e.exit_status()
        }
    }
}

//! Command-line front end: argument grammar, test-function documents,
//! JSON-lines reports and the acceptance suite.

pub mod args;
pub mod commands;
pub mod format;
pub mod report;
pub mod suite;
pub mod tolerances;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::commands::{Config, UsageError};
use crate::report::timed;

/// Exit code when every check passed.
pub const EXIT_PASS: i32 = 0;
/// Exit code when a check failed or could not be computed.
pub const EXIT_FAIL: i32 = 1;
/// Exit code for malformed arguments or inputs.
pub const EXIT_USAGE: i32 = 2;

/// Parses `argv`, runs the command, writes its output to `out` and returns
/// the exit code. Usage errors go to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(UsageError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<bool, UsageError> {
    let cfg = Config::from_global(&cli.global)?;
    let io = |e: std::io::Error| UsageError(format!("cannot write output: {e}"));
    if let Command::Suite { only } = &cli.command {
        let mut outcomes = Vec::new();
        for c in suite::select(only)? {
            let start = Instant::now();
            let mut o = suite::run_criterion(&cfg, c);
            if cli.global.timing {
                let ms = start.elapsed().as_millis() as u64;
                o.reports.iter_mut().for_each(|r| r.runtime_ms = Some(ms));
            }
            outcomes.push(o);
        }
        if cli.global.json {
            for o in &outcomes {
                for r in &o.reports {
                    writeln!(out, "{}", r.to_json_line()).map_err(io)?;
                }
            }
            writeln!(out, "{}", suite::summary_json(&outcomes)).map_err(io)?;
        } else {
            write!(out, "{}", suite::summary_table(&outcomes)).map_err(io)?;
        }
        return Ok(outcomes.iter().all(|o| o.pass));
    }
    let mut failure = None;
    let reports = timed(cli.global.timing, || match commands::run(&cfg, &cli.command) {
        Ok(r) => r,
        Err(e) => {
            failure = Some(e);
            Vec::new()
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    for r in &reports {
        writeln!(out, "{}", r.to_json_line()).map_err(io)?;
    }
    Ok(reports.iter().all(|r| r.pass))
}

//! Command-line front end for `readk`.
//!
//! Output is JSON lines by default, one record per line, with every real
//! number written to 17 significant digits. Exit status is 0 on success, 1
//! when an audited inequality fails and 2 on usage or validation errors.

pub mod args;
pub mod commands;
pub mod output;

use clap::error::ErrorKind;
use clap::Parser;

pub use commands::GUARD_VAR;

/// Exit status, standard output and standard error of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one command line (including the program name). `guard` is the
/// value of the enumeration guard variable, if set.
pub fn run<I, S>(argv: I, guard: Option<&str>) -> Run
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Run { code: 0, stdout: e.to_string(), stderr: String::new() }
                }
                _ => Run { code: 2, stdout: String::new(), stderr: diagnostic(&e.to_string()) },
            };
        }
    };
    match commands::execute(&cli.command, guard) {
        Ok(outcome) => {
            let mut stdout = output::render(&outcome.records, cli.pretty);
            if let Some(raw) = outcome.raw {
                stdout.push_str(&raw);
            }
            Run { code: if outcome.passed { 0 } else { 1 }, stdout, stderr: String::new() }
        }
        Err(message) => Run { code: 2, stdout: String::new(), stderr: diagnostic(&message) },
    }
}

/// The message before any usage block, folded onto one line and prefixed
/// with the program name.
fn diagnostic(message: &str) -> String {
    let text: Vec<&str> = message
        .lines()
        .map(str::trim)
        .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
        .filter(|l| !l.is_empty())
        .collect();
    let line = if text.is_empty() { "unknown error".to_string() } else { text.join(" ") };
    let line = line.strip_prefix("error: ").unwrap_or(&line);
    format!("readk: {line}\n")
}

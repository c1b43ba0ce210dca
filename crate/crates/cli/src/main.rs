use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let guard = std::env::var(readk_cli::GUARD_VAR).ok();
    let run = readk_cli::run(std::env::args_os(), guard.as_deref());
    let _ = std::io::stdout().write_all(run.stdout.as_bytes());
    let _ = std::io::stderr().write_all(run.stderr.as_bytes());
    ExitCode::from(run.code as u8)
}

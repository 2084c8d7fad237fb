use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use hoffman::cli::{run, Cli, ENUM_CAP_VAR};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cap = std::env::var(ENUM_CAP_VAR).ok();
    let outcome = run(&cli, cap.as_deref());
    // one write per stream so the report lands in a single piece
    let _ = std::io::stdout().lock().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().lock().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.exit_code as u8)
}

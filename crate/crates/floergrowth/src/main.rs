use std::io::Write;
use std::process::ExitCode;

use floergrowth::cli;

fn main() -> ExitCode {
    let args: Vec<_> = std::env::args_os().collect();
    let level = if cli::wants_verbose(&args) { "debug" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let out = cli::run(args);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code)
}

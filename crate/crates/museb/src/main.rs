use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use museb::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let (mut out, mut err) = (stdout.lock(), stderr.lock());
    let code = run(&cli, &mut out, &mut err);
    let _ = out.flush();
    ExitCode::from(code)
}

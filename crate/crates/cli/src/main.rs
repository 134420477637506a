use std::io::Write;
use std::process::ExitCode;

use biextra_cli::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, code) = run(&cli);
    // a closed pipe is not an error worth reporting
    let _ = if code == 2 { writeln!(std::io::stderr(), "{text}") } else { writeln!(std::io::stdout(), "{text}") };
    ExitCode::from(code)
}

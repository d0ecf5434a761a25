use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use magfib_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match magfib_cli::run(cli.command) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(outcome.text.as_bytes());
            let _ = out.flush();
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = match arw::cli::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // 2 is reserved for step-cap exhaustion
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match arw::cli::run(cli) {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

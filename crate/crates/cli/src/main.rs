use std::process::ExitCode;

use piecewise_attractor_cli::config::{from_args, ArgsError};
use piecewise_attractor_cli::run;

fn main() -> ExitCode {
    let config = match from_args(std::env::args_os()) {
        Ok(config) => config,
        Err(ArgsError::Clap(e)) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
        Err(ArgsError::Run(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(&config) {
        Ok(summary) => {
            eprintln!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

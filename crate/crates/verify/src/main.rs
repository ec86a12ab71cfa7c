use std::io;
use std::process::ExitCode;

use clap::Parser;
use racah_verify::cli::Cli;
use racah_verify::config::MAX_DEFAULT_N;
use racah_verify::{run, Status};

fn main() -> ExitCode {
    let config = match Cli::parse().into_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(Status::Usage as u8);
        }
    };
    if config.n > MAX_DEFAULT_N {
        eprintln!(
            "warning: n = {} grows the identity count and operator sizes combinatorially; expect long runs",
            config.n
        );
    }
    let status = match run(&config, io::stdout().lock()) {
        Ok(s) if s.all_passed() => Status::Passed,
        Ok(_) => Status::IdentityFailure,
        Err(e) => {
            eprintln!("error: {e}");
            Status::Usage
        }
    };
    ExitCode::from(status as u8)
}

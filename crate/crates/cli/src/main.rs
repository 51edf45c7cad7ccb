use std::process::ExitCode;

use clap::Parser;
use meridian_cli::{run, Cli};

fn main() -> ExitCode {
    // clap would exit with 2 on bad arguments, which is the truncation code
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use symdyn_cli::{exit_code, run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are input errors; --help and --version succeed
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli.command) {
        Ok(report) => {
            // a closed pipe downstream is not our failure
            let _ = writeln!(std::io::stdout().lock(), "{}", report.to_json());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

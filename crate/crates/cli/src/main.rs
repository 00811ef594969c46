use std::process::ExitCode;

use clap::Parser;
use fischer_cli::{exit, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match &out.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &out.text) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(exit::FAILED);
                    }
                }
                None => print!("{}", out.text),
            }
            ExitCode::from(out.status)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.status)
        }
    }
}

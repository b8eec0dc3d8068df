use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use otto_cli::{Cli, EXIT_OK};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match cli.execute() {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            match (&cli.out, outcome.note) {
                (None, note) => {
                    let _ = stdout.write_all(outcome.body.as_bytes());
                    if let Some(note) = note {
                        eprintln!("{note}");
                    }
                }
                (Some(_), Some(note)) => {
                    let _ = writeln!(stdout, "{note}");
                }
                (Some(_), None) => {}
            }
            ExitCode::from(EXIT_OK as u8)
        }
        Err(e) => {
            eprintln!("otto: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

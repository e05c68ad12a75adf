use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use np_region_cli::{run_and_write, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run_and_write(&cli) {
        Ok(Some(text)) => {
            let mut out = std::io::stdout().lock();
            if out
                .write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use entrofunc::cli::{env_cap_mb, execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = env_cap_mb().and_then(|mb| execute(&cli, mb));
    match result {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.stdout.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(out.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("entrofunc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

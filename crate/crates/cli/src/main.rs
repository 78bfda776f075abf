use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use cyforge_cli::commands::{execute, Cli, Command};
use cyforge_cli::server;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::Serve { port, state_dir } = cli.command {
        let runtime = tokio::runtime::Runtime::new().expect("tokio runtime");
        return match runtime.block_on(server::serve(port, state_dir)) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        };
    }
    match execute(&cli.command) {
        Ok(out) => {
            let _ = std::io::stdout().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

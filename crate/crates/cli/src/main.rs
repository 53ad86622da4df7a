use std::process::ExitCode;

use clap::Parser;
use cleanflex_cli::{run, Command, Flags, RunConfig, EXIT_INPUT};

/// Clean flexes, vertices and sextactic points, with CSV and SVG output.
#[derive(Parser)]
#[command(name = "cleanflex", version)]
struct Cli {
    /// May be omitted when the --config file names it.
    #[arg(value_enum)]
    command: Option<Command>,
    #[command(flatten)]
    flags: Flags,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            return ExitCode::from(code as u8);
        }
    };
    let status = RunConfig::resolve(cli.command, cli.flags).and_then(|cfg| run(&cfg));
    match status {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}

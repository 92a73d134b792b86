use std::process::ExitCode;

use clap::Parser;
use magnon_cli::presets::UnknownPreset;
use magnon_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(manifest) => {
            println!(
                "[{}] wrote {} files in {:.2} s",
                manifest.command,
                manifest.outputs.len(),
                manifest.total_seconds
            );
            for w in &manifest.warnings {
                eprintln!("warning: {w}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UnknownPreset>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

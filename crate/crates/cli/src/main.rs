use std::process::ExitCode;

use arraysync_cli::config::{self, Args};
use arraysync_cli::{preset, runner, CliError};
use clap::error::ErrorKind;
use clap::Parser;

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let first_line = e.to_string();
            let first_line = first_line.lines().next().unwrap_or_default().to_owned();
            return fail(&CliError::Config(first_line));
        }
    };

    match run(&args) {
        Ok(outputs) => {
            for path in outputs {
                println!("wrote {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}

fn run(args: &Args) -> arraysync_cli::Result<Vec<std::path::PathBuf>> {
    let resolved = config::resolve(args)?;

    if let Some(threads) = resolved.threads {
        if threads == 0 {
            return Err(CliError::Config(
                "threads must be at least 1, got 0".to_owned(),
            ));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Runtime(e.to_string()))?;
    }

    match resolved.preset {
        Some(p) => preset::run_preset(&resolved, p),
        None => runner::run_plain(&resolved),
    }
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{e}");
    ExitCode::from(e.exit_code() as u8)
}

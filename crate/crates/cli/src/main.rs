mod args;
mod commands;
mod emit;
mod error;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use error::CliError;

fn run(cli: &Cli) -> Result<(), CliError> {
    #[cfg(feature = "parallel")]
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--jobs: {e}")))?;
    }
    #[cfg(not(feature = "parallel"))]
    if cli.jobs.is_some_and(|j| j > 1) {
        eprintln!("warning: built without the parallel feature, --jobs is ignored");
    }

    let out = commands::run(&cli.command, cli.format)?;
    match &cli.out {
        Some(path) => {
            if let Some((ext, side)) = &out.side {
                std::fs::write(path.with_extension(ext), side)?;
            }
            std::fs::write(path, &out.body)?;
        }
        None => std::io::stdout().lock().write_all(out.body.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

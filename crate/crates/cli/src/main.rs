use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use nlg_cli::{execute, Cli, CliError, RunConfig};

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("NLG_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("NLG_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot size worker pool: {e}")))
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    configure_threads()?;
    let config = RunConfig::from_cli(cli)?;
    let rendered = execute(&config)?;
    match &config.out {
        Some(path) => std::fs::write(path, &rendered.text)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(rendered.text.as_bytes());
        }
    }
    match rendered.failure {
        Some(msg) => Err(CliError::Failed(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nlg: {e}");
            e.exit_code()
        }
    }
}

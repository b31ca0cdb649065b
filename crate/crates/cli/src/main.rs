mod args;
mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, Format};
use commands::Failure;

const EXIT_FAILED: u8 = 1;
const EXIT_CAP: u8 = 2;
const EXIT_USAGE: u8 = 64;

fn threads() -> Result<(), String> {
    let Ok(v) = std::env::var("HW_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("HW_THREADS must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let argv = match config::merge_config(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    if let Err(e) = threads() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    let result = match &cli.command {
        Command::Count(a) => commands::count(a, cli.timing),
        Command::Verify(a) => commands::verify(a),
        Command::Table(a) => commands::table(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::Threshold(a) => commands::threshold(a),
        Command::Integrate(a) => commands::integrate(a, cli.timing),
        Command::Simulate(a) => commands::simulate(a, cli.timing),
        Command::Lambda(a) => commands::lambda(a),
    };
    let run = match result {
        Ok(r) => r,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(EXIT_USAGE);
        }
        Err(Failure::Cap(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(EXIT_CAP);
        }
    };
    for w in &run.warnings {
        eprintln!("warning: {w}");
    }
    let format = cli.format.unwrap_or(Format::Table);
    let text = match (&run.text, format) {
        (Some(t), Format::Table) => t.clone(),
        _ => run.output.render(format),
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = output::write_atomic(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_USAGE);
            }
        }
        None => print!("{text}"),
    }
    if run.failed {
        ExitCode::from(EXIT_FAILED)
    } else {
        ExitCode::SUCCESS
    }
}

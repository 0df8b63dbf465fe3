mod args;
mod commands;
mod io;
mod manifest;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn run(cli: &Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::Haar(a) => commands::haar(a),
        Command::Decompose(a) => commands::decompose(a),
        Command::Compose(a) => commands::compose_cmd(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Sample(a) => commands::sample(a),
        Command::Visibilities(a) => commands::visibilities(a),
        Command::Synthesize(a) => commands::synthesize(a),
        Command::Reconstruct(a) => commands::reconstruct(a),
        Command::Chip(a) => commands::chip(a),
        Command::Report(a) => commands::report(a),
        Command::ExportFixtures(a) => commands::export_fixtures(a),
    }
}

/// Library errors carry their own kind; anything else is classified by the
/// first recognisable cause.
fn error_kind(err: &anyhow::Error) -> &'static str {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<bosim::Error>() {
            return e.kind();
        }
        if cause.is::<serde_json::Error>() {
            return "parse";
        }
        if cause.is::<std::io::Error>() {
            return "io";
        }
    }
    "runtime"
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.render().to_string();
            eprintln!(
                "error[usage]: {}",
                text.trim_start_matches("error: ").trim_end()
            );
            return ExitCode::FAILURE;
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e:#}", error_kind(&e));
            ExitCode::FAILURE
        }
    }
}

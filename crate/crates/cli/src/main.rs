mod args;
mod commands;
mod failure;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, ConfigFile};
use failure::CliError;

fn load_config(cli: &mut Cli) -> Result<(), CliError> {
    let Some(path) = cli.global.config.clone() else {
        return Ok(());
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::input("cli::config", format!("{}: {e}", path.display())))?;
    let cfg: ConfigFile = serde_json::from_str(&text)
        .map_err(|e| CliError::input("cli::config", format!("{}: {e}", path.display())))?;
    cli.apply_config(&cfg);
    Ok(())
}

fn run(mut cli: Cli) -> Result<(), CliError> {
    load_config(&mut cli)?;
    log::debug!("running {}", cli.command.name());
    let g = &cli.global;
    let rendered = match &cli.command {
        Command::Delta1d(a) => commands::delta1d(g, a)?,
        Command::Born(a) => commands::born(g, a)?,
        Command::Coherence(a) => commands::coherence(g, a)?,
        Command::Rutherford(a) => commands::rutherford(g, a)?,
        Command::Sample(a) => commands::sample(g, a)?,
        Command::Table1(a) => commands::table1(g, a)?,
    };
    output::emit(g.output.as_deref(), &rendered.body)?;
    if let (Some(path), Some(meta)) = (&g.output, &rendered.sidecar) {
        commands::write_sidecar(path, meta)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("COHSCAT_LOG", "warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::FAILURE
        }
    }
}

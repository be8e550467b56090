mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::RunConfig;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let cfg = RunConfig::from_args(&cli.global)?;
    match &cli.command {
        Command::Timeline {
            analyzed,
            multi_attack,
            currency,
        } => commands::timeline(&cfg, *analyzed, *multi_attack, currency.as_deref())?,
        Command::Clean {
            corpus,
            event,
            raw_text,
        } => commands::clean(&cfg, corpus, event.as_deref(), *raw_text)?,
        Command::Profile { event, corpus } => commands::profile(&cfg, event, corpus)?,
        Command::Peaks {
            events,
            kind,
            corpus,
        } => commands::peaks(&cfg, events, (*kind).into(), corpus)?,
        Command::Heatmap { events, corpus } => commands::heatmap(&cfg, events, corpus)?,
        Command::Volumetrics { events, corpus } => commands::volumetrics_cmd(&cfg, events, corpus)?,
        Command::Watch(args) => {
            if commands::watch(&cfg, args)? > 0 {
                return Ok(2);
            }
        }
    }
    Ok(0)
}

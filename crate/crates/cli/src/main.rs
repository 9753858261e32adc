use std::process::ExitCode;

use clap::Parser;
use parind_cli::commands::{command_name, run, Cli};
use parind_cli::envelope::{flatten, timestamp, ErrorEnvelope, VERSION};
use parind_cli::{CliError, OutputFormat, ReportEnvelope};

fn emit_error(command: &str, err: &CliError) -> ExitCode {
    eprintln!("error: {err}");
    let env = ErrorEnvelope::new(command, err);
    println!("{}", serde_json::to_string_pretty(&env).expect("envelope serializes"));
    ExitCode::from(err.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            let msg = e.render().to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            return emit_error("parind", &CliError::Usage(first.to_string()));
        }
    };
    let name = command_name(&cli.command);
    let cfg = cli.config();
    if let Err(e) = cfg.validate() {
        return emit_error(name, &e);
    }
    if let Some(t) = cli.threads {
        // Fails only if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match run(&cli, &cfg) {
        Ok(out) => {
            for note in &out.notes {
                eprintln!("{note}");
            }
            let env = ReportEnvelope {
                version: VERSION.into(),
                config: cfg.clone(),
                command: out.command,
                timestamp: timestamp(),
                seed: cfg.seed,
                payload: out.payload,
                summary: out.summary,
            };
            match cfg.format {
                OutputFormat::Json => {
                    println!("{}", serde_json::to_string_pretty(&env).expect("envelope serializes"))
                }
                OutputFormat::Table => {
                    let mut lines = Vec::new();
                    flatten("", &serde_json::to_value(&env).expect("envelope serializes"), &mut lines);
                    for l in lines {
                        println!("{l}");
                    }
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => emit_error(name, &e),
    }
}

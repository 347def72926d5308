use std::process::ExitCode;

use clap::Parser;
use meandim_cli::args::{resolve, Cli};
use meandim_cli::config::PRESETS;
use meandim_cli::error::CliError;
use meandim_cli::report::emit;
use meandim_cli::run::run;
use meandim_cli::write_output;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let Some((command, common)) = cli.command.split() else {
        for (name, text) in PRESETS {
            let summary = text.lines().next().unwrap_or("").trim_start_matches('#').trim();
            println!("{name}\t{summary}");
        }
        return Ok(());
    };
    if let Some(jobs) = common.jobs {
        if jobs == 0 {
            return Err(CliError::Config("--jobs must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Config(format!("cannot size the worker pool: {e}")))?;
    }
    let cfg = resolve(command, common)?;
    let report = run(&cfg)?;
    let bytes = emit(&report, cfg.output.format)?;
    write_output(&cfg, &bytes)
}

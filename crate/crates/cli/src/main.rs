mod args;
mod commands;
mod io;
mod selftest;

use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;
use matcount::{Budget, Error};

use args::Cli;
use commands::Context;
use io::{param, ExperimentConfig, Output};

const EXIT_CONTRACT: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_SELFTEST: u8 = 1;

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Budget { .. }) => EXIT_BUDGET,
        _ => EXIT_CONTRACT,
    }
}

fn run(cli: &Cli) -> Result<u8> {
    let g = &cli.global;
    if let Some(t) = g.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()?;
    }
    let out = Output {
        path: g.out.clone(),
        format: g.format,
    };
    if g.selftest {
        let report = selftest::run(cli.command.name());
        out.json(&report)?;
        return Ok(if report.passed { 0 } else { EXIT_SELFTEST });
    }
    if !(g.budget.is_finite() && g.budget > 0.0) {
        return Err(param("--budget must be a positive log2 operation count"));
    }
    let ctx = Context {
        budget: Budget::from_log2(g.budget),
        seed: g.seed,
        config: ExperimentConfig::load(g.config.as_deref())?,
        out,
    };
    commands::run(&cli.command, &ctx)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

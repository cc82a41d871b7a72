// `!(x > y)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, out) = match &cli.command {
        Command::Analyze(a) => (commands::analyze(a), a.output.out.as_deref()),
        Command::Surface(a) => (commands::surface(a), a.output.out.as_deref()),
        Command::Trust(a) => (commands::trust(a), a.output.out.as_deref()),
        Command::FitAlpha(a) => (commands::fit_alpha(a), a.output.out.as_deref()),
        Command::Roc(a) => (commands::roc(a), a.output.out.as_deref()),
        Command::Simulate(a) => (commands::simulate(a), a.output.out.as_deref()),
    };
    let outcome = result.and_then(|(emission, status)| {
        output::emit(&emission, out)?;
        Ok(status)
    });
    match outcome {
        Ok(commands::Status::Ok) => ExitCode::SUCCESS,
        Ok(commands::Status::VerificationFailed) => {
            eprintln!("error: simulation disagrees with the analytic rates beyond the z threshold");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nlstring::app::{self, Command, FailureKind, RunOptions};
use nlstring::config::{load_config, RunConfig};

#[derive(Parser)]
#[command(name = "nlstring", version, about = "Nonlinear charged string laboratory")]
struct Cli {
    /// Flat key=value configuration file; defaults apply when omitted.
    #[arg(long, short, global = true)]
    config: Option<PathBuf>,

    /// Extra key=value assignments applied after the config file.
    #[arg(long = "set", short = 's', global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Lowest eigenvalues of the truncated Hamiltonian.
    Spectrum,
    /// Transition amplitudes over a time grid.
    Evolve {
        /// Exact evolution instead of first-order theory.
        #[arg(long)]
        exact: bool,
    },
    /// One-to-three phonon decay rates allowed by the selection rules.
    Rates {
        #[arg(long)]
        initial: Option<i32>,
    },
    /// Photon emission rates and amplitudes.
    Emission,
    /// Classical field trajectory.
    Classical,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let fail = |kind: FailureKind, err: nlstring::Error| {
        eprintln!("{}", app::error_record(kind, &err));
        ExitCode::from(kind.exit_code() as u8)
    };
    let mut cfg = match &cli.config {
        Some(path) => match load_config(path) {
            Ok(c) => c,
            Err(e) => return fail(FailureKind::Config, e),
        },
        None => RunConfig::default(),
    };
    if let Err(e) = cfg.apply_overrides(&cli.overrides).and_then(|_| app::configure_threads()) {
        return fail(FailureKind::Config, e);
    }
    let (command, opts) = match cli.command {
        Cmd::Spectrum => (Command::Spectrum, RunOptions::default()),
        Cmd::Evolve { exact } => (Command::Evolve, RunOptions { exact, ..Default::default() }),
        Cmd::Rates { initial } => (Command::Rates, RunOptions { initial, ..Default::default() }),
        Cmd::Emission => (Command::Emission, RunOptions::default()),
        Cmd::Classical => (Command::Classical, RunOptions::default()),
    };
    match app::run(command, &cfg, &opts).and_then(|r| r.emit(&cfg)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(nlstring::Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => fail(FailureKind::Numeric, e),
    }
}

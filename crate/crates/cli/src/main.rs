use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use hyperpack::format::emit_transcript;
use hyperpack::reduction::{AdversaryKind, Variant};
use hyperpack::vbp::DEFAULT_OPT_CAP;
use hyperpack_cli::commands::{cmd_adversary, cmd_pack, cmd_reduce};
use hyperpack_cli::config::{Command, ExperimentConfig, Scale};
use hyperpack_cli::report::Report;
use hyperpack_cli::suites::cmd_verify;

#[derive(Parser)]
#[command(
    name = "hyperpack",
    version,
    about = "Online vector bin packing and hypergraph coloring experiments"
)]
struct Cli {
    /// Largest instance handed to the exact optimum oracle.
    #[arg(long, global = true, default_value_t = DEFAULT_OPT_CAP)]
    cap_n: usize,
    /// Output file: the transcript for `adversary`, the report otherwise.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Pack every instance in a file with FirstFit and check the bin bound.
    Pack {
        instance: PathBuf,
        #[arg(long)]
        bin_size: Option<i64>,
    },
    /// Run the hypertree adversary against an online colorer.
    Adversary {
        #[arg(long, default_value = "firstfit")]
        colorer: String,
        #[arg(long = "uniformity", short = 'k')]
        k: usize,
        #[arg(long = "depth", short = 'm')]
        m: usize,
    },
    /// Drive a packer through the incidence reduction with an adversary.
    Reduce {
        #[arg(long, default_value = "killer")]
        adversary: AdversaryKind,
        #[arg(long, default_value = "firstfit")]
        packer: String,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        bin_size: usize,
        #[arg(long, default_value = "binary")]
        variant: Variant,
    },
    /// Run every invariant suite.
    Verify {
        #[arg(long, default_value = "smoke")]
        scale: Scale,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn config(cli: Cli) -> ExperimentConfig {
    let command = match cli.command {
        Cmd::Pack { instance, bin_size } => Command::Pack {
            input: instance,
            bin_size,
        },
        Cmd::Adversary { colorer, k, m } => Command::Adversary { colorer, k, m },
        Cmd::Reduce {
            adversary,
            packer,
            dim,
            bin_size,
            variant,
        } => Command::Reduce {
            adversary,
            packer,
            d: dim,
            bin_size,
            variant,
        },
        Cmd::Verify { scale, seed } => Command::Verify { scale, seed },
    };
    ExperimentConfig {
        command,
        cap_n: cli.cap_n,
        out: cli.out,
    }
}

fn write_report(report: &Report, out: Option<&PathBuf>) -> Result<()> {
    let text = report.to_text();
    print!("{}", text);
    if let Some(path) = out {
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn run(cfg: ExperimentConfig) -> Result<bool> {
    cfg.validate()?;
    let report = match &cfg.command {
        Command::Pack { input, bin_size } => cmd_pack(input, *bin_size, cfg.cap_n)?,
        Command::Adversary { colorer, k, m } => {
            let (report, transcript) = cmd_adversary(colorer, *k, *m, cfg.cap_n)?;
            if let Some(path) = &cfg.out {
                std::fs::write(path, emit_transcript(&transcript))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            print!("{}", report.to_text());
            return Ok(report.passed());
        }
        Command::Reduce {
            adversary,
            packer,
            d,
            bin_size,
            variant,
        } => cmd_reduce(*adversary, packer, *d, *bin_size, *variant)?,
        Command::Verify { scale, seed } => cmd_verify(*scale, *seed)?,
    };
    write_report(&report, cfg.out.as_ref())?;
    Ok(report.passed())
}

fn main() -> ExitCode {
    match run(config(Cli::parse())) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(2)
        }
    }
}

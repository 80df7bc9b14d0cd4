use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use qpack::cli::{load_config, run, Command, ExportFormat, RunOptions};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    /// Print the cluster representatives
    Orbit,
    /// Standard strip projection
    Generate,
    /// Modified projection with cluster completion
    Modify,
    /// Diffraction intensity on a grid and its peaks
    Diffract,
    /// Cluster, embedding and membership self-checks
    Verify,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Svg,
    Latex,
}

#[derive(Debug, Parser)]
#[command(name = "qpack", version, about = "Quasiperiodic packings of G-clusters")]
struct Args {
    command: Cmd,
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides `output_dir`)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Export format (repeatable; overrides `formats`)
    #[arg(long)]
    format: Vec<Format>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let command = match args.command {
        Cmd::Orbit => Command::Orbit,
        Cmd::Generate => Command::Generate,
        Cmd::Modify => Command::Modify,
        Cmd::Diffract => Command::Diffract,
        Cmd::Verify => Command::Verify,
    };
    let formats = (!args.format.is_empty()).then(|| {
        args.format
            .iter()
            .map(|f| match f {
                Format::Csv => ExportFormat::Csv,
                Format::Svg => ExportFormat::Svg,
                Format::Latex => ExportFormat::Latex,
            })
            .collect()
    });
    let opts = RunOptions {
        out_dir: args.out,
        formats,
    };
    let result = load_config(&args.config).and_then(|cfg| run(command, &cfg, &opts));
    match result {
        Ok(report) => {
            for (k, v) in &report.lines {
                println!("{k}={v}");
            }
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

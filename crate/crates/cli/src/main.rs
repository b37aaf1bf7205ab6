// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use shutter_cli::{
    emit_report, emit_sweep, parse_scenario, run_scenario, Format, Mode, RunOptions, OUT_DIR_ENV,
};

#[derive(Parser)]
#[command(
    name = "shutterlogic",
    version,
    about = "Run shutter-logic circuit scenarios"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Enumerate,
    Sample,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Execute a scenario and write a report.
    Run {
        scenario: PathBuf,
        #[arg(long, value_enum, default_value = "enumerate")]
        mode: ModeArg,
        #[arg(long, default_value_t = 4096)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        /// Report path; defaults to $SHUTTERLOGIC_OUT_DIR/<name>.<ext>, else stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = OUT_DIR_ENV, hide_env_values = true)]
        out_dir: Option<PathBuf>,
        /// Include wall-clock time (reports are then no longer reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Parse a scenario and report diagnostics.
    Check { scenario: PathBuf },
    /// Nested interferometer errors over a range of cycle counts.
    SweepIfm {
        #[arg(long, default_value_t = 1)]
        n_min: u32,
        #[arg(long, default_value_t = 199)]
        n_max: u32,
        #[arg(long)]
        odd_only: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = OUT_DIR_ENV, hide_env_values = true)]
        out_dir: Option<PathBuf>,
    },
}

fn load(path: &Path) -> Result<(String, shutter_cli::Scenario)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    match parse_scenario(&text) {
        Ok(s) => Ok((text, s)),
        Err(d) => bail!("{}: {}", path.display(), d.render(&text)),
    }
}

fn write_out(
    bytes: &[u8],
    out: Option<PathBuf>,
    out_dir: Option<PathBuf>,
    stem: &str,
    ext: &str,
) -> Result<()> {
    let target = out.or_else(|| out_dir.map(|d| d.join(format!("{stem}.{ext}"))));
    match target {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)
                    .with_context(|| format!("creating {}", parent.display()))?;
            }
            fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))
        }
        None => std::io::stdout().write_all(bytes).context("writing stdout"),
    }
}

fn execute(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run {
            scenario,
            mode,
            trials,
            seed,
            format,
            out,
            out_dir,
            timing,
        } => {
            let (_, parsed) = load(&scenario)?;
            let stem = scenario.file_stem().map_or_else(
                || "scenario".to_string(),
                |s| s.to_string_lossy().into_owned(),
            );
            let mode = match mode {
                ModeArg::Enumerate => Mode::Enumerate,
                ModeArg::Sample => Mode::Sample { trials, seed },
            };
            let options = RunOptions {
                name: stem.clone(),
                timing,
            };
            let report = run_scenario(&parsed, mode, &options)
                .map_err(|e| anyhow::anyhow!("{}: {e}", scenario.display()))?;
            let format = Format::from(format);
            write_out(
                &emit_report(&report, format),
                out,
                out_dir,
                &stem,
                format.extension(),
            )?;
            Ok(report.passed)
        }
        Command::Check { scenario } => {
            let (_, parsed) = load(&scenario)?;
            println!(
                "{}: ok ({} statements)",
                scenario.display(),
                parsed.statements().count()
            );
            Ok(true)
        }
        Command::SweepIfm {
            n_min,
            n_max,
            odd_only,
            format,
            out,
            out_dir,
        } => {
            let rows = shutter_core::interferometer::sweep(n_min, n_max, odd_only)?;
            let format = Format::from(format);
            let ext = if format == Format::Json {
                "json"
            } else {
                "csv"
            };
            write_out(&emit_sweep(&rows, format), out, out_dir, "sweep_ifm", ext)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

use std::fs::File;
use std::io::{self, BufWriter};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use qkd_sidechannel::cli::{
    emit_csv, read_csv, run_preset, run_sweep, write_fig3, zero_key_distance, Method, Preset, RateColumn,
    ScenarioConfig, SweepRow,
};

#[derive(Parser)]
#[command(version, about = "Decoy-state BB84 key rates under source side channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Efer,
    Gllp,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Efer => Method::EffectiveError,
            MethodArg::Gllp => Method::Gllp,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a scenario over distance and write CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Output file; defaults to the config's `output`, else stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
    },
    /// Side channel without cloner, one CSV per Δ.
    Fig1 {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        method: MethodArg,
    },
    /// Side channel plus cloner, one CSV per Δ.
    Fig2 {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        method: MethodArg,
    },
    /// Δ against HOM visibility.
    Fig3 {
        /// Output CSV file.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        mu: f64,
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Print the zero-key distance of a rate column.
    ZeroDistance {
        /// Scenario to sweep.
        #[arg(long, conflicts_with = "input", required_unless_present = "input")]
        config: Option<PathBuf>,
        /// Previously written sweep CSV.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value = "rate_effective_error")]
        column: String,
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
    },
}

fn load(path: &Path, method: Option<MethodArg>) -> Result<ScenarioConfig> {
    let mut cfg = ScenarioConfig::from_path(path).with_context(|| format!("loading {}", path.display()))?;
    if let Some(m) = method {
        cfg.method = m.into();
    }
    Ok(cfg)
}

fn preset(p: Preset, out: PathBuf, method: MethodArg) -> Result<()> {
    for s in run_preset(p, method.into(), &out)? {
        println!("{s}");
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Sweep { config, out, method } => {
            let cfg = load(&config, method)?;
            let rows = run_sweep(&cfg)?;
            match out.or(cfg.output) {
                Some(path) => {
                    let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                    emit_csv(&rows, BufWriter::new(f))?;
                    for col in RateColumn::ALL {
                        if col.value(&rows[0]).is_some() {
                            let d = zero_key_distance(&rows, col.name())?;
                            eprintln!("{}: {}", col.name(), describe(d));
                        }
                    }
                }
                None => emit_csv(&rows, io::stdout().lock())?,
            }
        }
        Command::Fig1 { out, method } => preset(Preset::Fig1, out, method)?,
        Command::Fig2 { out, method } => preset(Preset::Fig2, out, method)?,
        Command::Fig3 { out, mu, points } => write_fig3(mu, points, &out)?,
        Command::ZeroDistance {
            config,
            input,
            column,
            method,
        } => {
            let rows: Vec<SweepRow> = match (config, input) {
                (_, Some(path)) => {
                    let f = File::open(&path).with_context(|| format!("opening {}", path.display()))?;
                    read_csv(f)?
                }
                (Some(path), None) => run_sweep(&load(&path, method)?)?,
                (None, None) => unreachable!("clap requires one input"),
            };
            println!("{}", describe(zero_key_distance(&rows, &column)?));
        }
    }
    Ok(())
}

fn describe(d: Option<f64>) -> String {
    match d {
        Some(km) => format!("{km:.3}"),
        None => "none".to_string(),
    }
}

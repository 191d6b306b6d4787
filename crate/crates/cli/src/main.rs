//! `spinadc`: simulation campaigns for the spintronic flash ADC.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spinadc_core::{Architecture, RunConfig, SimError};

#[derive(Parser, Debug)]
#[command(name = "spinadc", version, about = "Spintronic 3-bit flash ADC simulator")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Run configuration (.json or .toml); omitted fields take defaults.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Master seed. Falls back to SPINADC_SEED, then to the config.
    #[arg(long, global = true, env = "SPINADC_SEED", value_name = "N")]
    seed: Option<u64>,
    /// Worker threads for campaigns; 0 uses all available cores.
    #[arg(long, global = true, default_value_t = 0, value_name = "N")]
    jobs: usize,
    /// Output directory; defaults to runs/<command>-<unix seconds>.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Single-device switching trajectory from the parallel state.
    Switch(SwitchArgs),
    /// Critical current over a width × bias grid.
    SweepIc(SweepArgs),
    /// Transfer curve, DNL/INL and a ramp conversion log.
    Ramp(RampArgs),
    /// Seeded thermal switching-error campaign.
    Montecarlo(MonteCarloArgs),
    /// Conventional and interleaved pipelines on the same sinusoid.
    CompareArch(CompareArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OnOff {
    On,
    Off,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProtocolChoice {
    /// SOT pulse at t = 0.
    Standard,
    /// SOT pulse after a 0.7 ns idle lead-in.
    Delayed,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ArchChoice {
    Conventional,
    Interleaved,
}

impl From<ArchChoice> for Architecture {
    fn from(a: ArchChoice) -> Self {
        match a {
            ArchChoice::Conventional => Architecture::Conventional,
            ArchChoice::Interleaved => Architecture::Interleaved,
        }
    }
}

#[derive(Args, Debug)]
pub struct SwitchArgs {
    /// SOT current, µA.
    #[arg(long, default_value_t = 30.0)]
    isot: f64,
    /// MTJ bias during the pulse, V.
    #[arg(long, default_value_t = 0.1)]
    vbias: f64,
    /// Thermal field; defaults to the config setting.
    #[arg(long)]
    thermal: Option<OnOff>,
    /// Ambient temperature, K; defaults to the config setting.
    #[arg(long)]
    temperature: Option<f64>,
    /// Independent trials; the trajectory file holds trial 0.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Pulse timeline; defaults to the config setting.
    #[arg(long)]
    protocol: Option<ProtocolChoice>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Heavy-metal widths as start:stop:count, nm.
    #[arg(long, default_value = "10:500:50")]
    widths: commands::Grid,
    /// Bias voltages as start:stop:count, V.
    #[arg(long, default_value = "0:0.4:9")]
    biases: commands::Grid,
}

#[derive(Args, Debug)]
pub struct RampArgs {
    #[arg(long, value_enum, default_value_t = ArchChoice::Interleaved)]
    arch: ArchChoice,
    /// Coarse ramp points for the transfer measurement.
    #[arg(long, default_value_t = 512)]
    steps: usize,
    /// Samples in the conversion log.
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(2..))]
    samples: u64,
    /// Relative 1-σ width mismatch; defaults to the config setting.
    #[arg(long)]
    mismatch: Option<f64>,
    /// Ignore any configured mismatch.
    #[arg(long, conflicts_with = "mismatch")]
    ideal: bool,
}

#[derive(Args, Debug)]
pub struct MonteCarloArgs {
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// SOT current as a multiple of Ic(0 V).
    #[arg(long, default_value_t = 1.2)]
    overdrive: f64,
    /// MTJ bias during the pulse, V.
    #[arg(long, default_value_t = 0.1)]
    vbias: f64,
    /// Ambient temperature, K; defaults to the config setting.
    #[arg(long)]
    temperature: Option<f64>,
    /// Pulse timeline.
    #[arg(long, value_enum, default_value_t = ProtocolChoice::Standard)]
    protocol: ProtocolChoice,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    /// Number of sinusoid samples (at least 10).
    #[arg(long = "samples", value_name = "N", default_value_t = 100, value_parser = at_least_ten)]
    n_samples: u64,
    /// Sinusoid periods across the record.
    #[arg(long, default_value_t = 3.0)]
    cycles: f64,
}

fn at_least_ten(s: &str) -> Result<u64, String> {
    let n: u64 = s.parse().map_err(|e| format!("{e}"))?;
    if n < 10 {
        return Err(format!("need at least 10 samples, got {n}"));
    }
    Ok(n)
}

pub enum Failure {
    Config(String),
    Simulation(String),
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        match e {
            SimError::InvalidConfig(_) => Failure::Config(e.to_string()),
            other => Failure::Simulation(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Simulation(format!("i/o: {e}"))
    }
}

fn load_config(global: &GlobalArgs) -> Result<RunConfig, Failure> {
    let mut cfg = match &global.config {
        Some(path) => RunConfig::from_path(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = global.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = load_config(&cli.global)?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.jobs)
        .build_global()
        .map_err(|e| Failure::Config(format!("--jobs: {e}")))?;
    let name = match &cli.command {
        Command::Switch(_) => "switch",
        Command::SweepIc(_) => "sweep-ic",
        Command::Ramp(_) => "ramp",
        Command::Montecarlo(_) => "montecarlo",
        Command::CompareArch(_) => "compare-arch",
    };
    let mut run = output::RunDir::create(name, cli.global.out.as_deref(), &cfg)?;
    let report = match &cli.command {
        Command::Switch(a) => commands::switch(&cfg, a, &mut run)?,
        Command::SweepIc(a) => commands::sweep_ic(&cfg, a, &mut run)?,
        Command::Ramp(a) => commands::ramp(&cfg, a, &mut run)?,
        Command::Montecarlo(a) => commands::montecarlo(&cfg, a, &mut run)?,
        Command::CompareArch(a) => commands::compare_arch(&cfg, a, &mut run)?,
    };
    print!("{report}");
    println!("outputs in {}", run.path().display());
    run.finish()?;
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Simulation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
    }
}

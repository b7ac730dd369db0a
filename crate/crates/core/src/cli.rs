//! Command-line front end and the sweep runner behind it.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::beam::{BeamPair, UeArchitecture};
use crate::channel::{detect_blockage_events, ChannelTrace};
use crate::config::{bundled_names, bundled_scenario, ChannelSource, ConfigError, RunConfig};
use crate::engine::SimTime;
use crate::sim::{simulate, SimError, SimOutcome};
use crate::stack::record;
use crate::summary::{summarize, RunSummary};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "mmwsim",
    version,
    about = "mmWave beam-tracking link simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one architecture or a sweep and write CSVs plus summary.json.
    Run(RunArgs),
    /// Write a bundled scenario document.
    MakeScenario {
        /// Scenario name; omit to list the bundled ones.
        name: Option<String>,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find blockage intervals of one beam pair in a trace.
    DetectEvents(DetectArgs),
    /// Parse and check a config without running it.
    ValidateConfig {
        #[arg(long)]
        scenario: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Config file or bundled scenario name.
    #[arg(long)]
    pub scenario: Option<String>,
    /// Replace the configured channel with a trace CSV.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Comma-separated subset of digital, analog, none.
    #[arg(long, value_delimiter = ',')]
    pub arch: Option<Vec<String>>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub window_ms: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    /// Trace CSV to analyse.
    #[arg(long, conflicts_with = "scenario")]
    pub trace: Option<PathBuf>,
    /// Config file or bundled scenario name whose channel is analysed.
    #[arg(long)]
    pub scenario: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub tx: usize,
    #[arg(long, default_value_t = 0)]
    pub rx: usize,
    #[arg(long, default_value_t = 6.0)]
    pub threshold_db: f64,
    #[arg(long, default_value_t = 50.0)]
    pub min_duration_ms: f64,
    /// Scan interval of `--trace`.
    #[arg(long, default_value_t = 1.0)]
    pub interval_ms: f64,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::DurationMismatch { .. } | SimError::InvalidParams(_) => {
                CliError::Config(e.to_string())
            }
            SimError::Channel(_) => CliError::Runtime(e.to_string()),
        }
    }
}

/// Runs every configured architecture, each on its own thread.
pub fn run_sweep(cfg: &RunConfig, trace: &ChannelTrace) -> Result<Vec<SimOutcome>, SimError> {
    std::thread::scope(|s| {
        let handles: Vec<_> = cfg
            .architectures
            .iter()
            .map(|&arch| {
                let params = cfg.params_for(arch);
                s.spawn(move || simulate(trace, &params))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("simulation thread panicked"))
            .collect()
    })
}

pub fn csv_path(out_dir: &Path, arch: UeArchitecture) -> PathBuf {
    out_dir.join(format!("{}.csv", arch.name()))
}

/// Writes `<arch>.csv` per outcome and `summary.json`; returns the summary.
pub fn write_outputs(
    out_dir: &Path,
    cfg: &RunConfig,
    outcomes: &[SimOutcome],
) -> std::io::Result<RunSummary> {
    fs::create_dir_all(out_dir)?;
    let mut runs = Vec::new();
    for o in outcomes {
        let mut buf = Vec::new();
        record::write_csv(&o.rows, &mut buf).map_err(std::io::Error::other)?;
        fs::write(csv_path(out_dir, o.architecture), &buf)?;
        let rows: Vec<_> = o.rows.iter().map(|r| r.to_csv_record()).collect();
        runs.push(summarize(
            o.architecture,
            &rows,
            cfg.params.sample_window,
            o.rlc.dropped_bytes,
        ));
    }
    let summary = RunSummary {
        seed: cfg.params.seed,
        window_ms: cfg.params.sample_window.as_millis_f64(),
        duration_s: outcomes.first().map_or(0.0, |o| o.duration.as_secs_f64()),
        runs,
    };
    let mut json = serde_json::to_string_pretty(&summary).map_err(std::io::Error::other)?;
    json.push('\n');
    fs::write(out_dir.join("summary.json"), json)?;
    Ok(summary)
}

/// A path to an existing file, or else the name of a bundled scenario.
fn load_scenario(arg: &str) -> Result<RunConfig, ConfigError> {
    let path = Path::new(arg);
    if path.is_file() || bundled_scenario(arg).is_none() {
        RunConfig::load(path)
    } else {
        RunConfig::bundled(arg)
    }
}

fn resolve_run_config(args: &RunArgs) -> Result<RunConfig, CliError> {
    let mut cfg = match &args.scenario {
        Some(s) => load_scenario(s)?,
        None => RunConfig::default(),
    };
    if let Some(trace) = &args.trace {
        if !trace.is_file() {
            return Err(CliError::Config(format!(
                "trace file {} does not exist",
                trace.display()
            )));
        }
        cfg.channel = ChannelSource::Trace {
            path: trace.clone(),
            sample_interval: cfg.channel.sample_interval(),
        };
    }
    if let Some(list) = &args.arch {
        let mut archs = Vec::new();
        for a in list {
            let arch: UeArchitecture = a
                .parse()
                .map_err(|e| CliError::Config(format!("--arch: {e}")))?;
            if !archs.contains(&arch) {
                archs.push(arch);
            }
        }
        if archs.is_empty() {
            return Err(CliError::Config(
                "--arch needs at least one architecture".into(),
            ));
        }
        cfg.architectures = archs;
    }
    if let Some(seed) = args.seed {
        cfg.params.seed = seed;
        if let ChannelSource::Synthetic { options, .. } = &mut cfg.channel {
            options.seed = seed;
        }
    }
    if let Some(out) = &args.out {
        cfg.out_dir = out.clone();
    }
    if let Some(w) = args.window_ms {
        if !w.is_finite() || w <= 0.0 {
            return Err(CliError::Config(format!(
                "--window-ms must be positive, got {w}"
            )));
        }
        cfg.params.sample_window = SimTime::from_millis_f64(w);
    }
    Ok(cfg)
}

fn cmd_run(args: &RunArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = resolve_run_config(args)?;
    let trace = cfg
        .channel
        .build()
        .map_err(|e| CliError::Config(format!("channel: {e}")))?;
    let outcomes = run_sweep(&cfg, &trace)?;
    let summary = write_outputs(&cfg.out_dir, &cfg, &outcomes)
        .map_err(|e| CliError::Runtime(format!("writing {}: {e}", cfg.out_dir.display())))?;
    for s in &summary.runs {
        let _ = writeln!(
            stdout,
            "{:<8} mean SINR {:6.2} dB  min {:6.2} dB  goodput {:8.1} Mb/s  RTT p50 {:6.2} ms  p95 {:6.2} ms  drops {} B",
            s.architecture.name(),
            s.mean_sinr_db,
            s.min_sinr_db,
            s.mean_goodput_bps / 1e6,
            s.p50_rtt_ms,
            s.p95_rtt_ms,
            s.dropped_bytes
        );
    }
    let _ = writeln!(stdout, "wrote {}", cfg.out_dir.display());
    Ok(())
}

fn cmd_make_scenario(
    name: Option<&str>,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let Some(name) = name else {
        for n in bundled_names() {
            let _ = writeln!(stdout, "{n}");
        }
        return Ok(());
    };
    let doc = bundled_scenario(name).ok_or_else(|| {
        CliError::Config(format!(
            "unknown scenario {name:?}; available: {}",
            bundled_names().join(", ")
        ))
    })?;
    match out {
        Some(path) => fs::write(path, doc)
            .map_err(|e| CliError::Runtime(format!("writing {}: {e}", path.display())))?,
        None => {
            let _ = stdout.write_all(doc.as_bytes());
        }
    }
    Ok(())
}

fn cmd_detect(args: &DetectArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let trace = match (&args.trace, &args.scenario) {
        (Some(path), _) => {
            if args.interval_ms.is_nan() || args.interval_ms <= 0.0 {
                return Err(CliError::Config("--interval-ms must be positive".into()));
            }
            ChannelTrace::load(path, SimTime::from_millis_f64(args.interval_ms))
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        }
        (None, scenario) => {
            let cfg = match scenario {
                Some(s) => load_scenario(s)?,
                None => RunConfig::default(),
            };
            cfg.channel
                .build()
                .map_err(|e| CliError::Config(format!("channel: {e}")))?
        }
    };
    let pac = BeamPair::new(args.tx, args.rx).ok_or_else(|| {
        CliError::Config(format!(
            "beam pair ({}, {}) outside the codebook",
            args.tx, args.rx
        ))
    })?;
    if args.min_duration_ms.is_nan() || args.min_duration_ms < 0.0 {
        return Err(CliError::Config("--min-duration-ms must be >= 0".into()));
    }
    let events = detect_blockage_events(
        &trace,
        pac,
        args.threshold_db,
        SimTime::from_millis_f64(args.min_duration_ms),
    )
    .map_err(|e| CliError::Config(e.to_string()))?;
    let _ = writeln!(stdout, "start_s,end_s,max_depth_db");
    for e in events {
        let _ = writeln!(
            stdout,
            "{},{},{}",
            e.start.as_secs_f64(),
            e.end.as_secs_f64(),
            e.max_depth_db
        );
    }
    Ok(())
}

fn cmd_validate(path: &Path, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = RunConfig::load(path)?;
    let trace = cfg
        .channel
        .build()
        .map_err(|e| CliError::Config(format!("channel: {e}")))?;
    if let Some(run) = cfg.params.duration {
        if run > trace.duration() {
            return Err(SimError::DurationMismatch {
                run,
                trace: trace.duration(),
            }
            .into());
        }
    }
    let archs: Vec<_> = cfg.architectures.iter().map(|a| a.name()).collect();
    let _ = writeln!(
        stdout,
        "ok: {} s channel, architectures {}",
        trace.duration().as_secs_f64(),
        archs.join(",")
    );
    Ok(())
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Run(args) => cmd_run(args, stdout),
        Command::MakeScenario { name, out } => {
            cmd_make_scenario(name.as_deref(), out.as_deref(), stdout)
        }
        Command::DetectEvents(args) => cmd_detect(args, stdout),
        Command::ValidateConfig { scenario } => cmd_validate(scenario, stdout),
    }
}

/// Parses `args`, runs the command, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let mut stdout = std::io::stdout().lock();
    match execute(&cli, &mut stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

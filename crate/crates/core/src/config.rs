//! TOML run configuration.
//!
//! Every section and key is optional; omitted values take the defaults of
//! the bundled `three_blockers` scenario. Semantic errors are reported with
//! the line of the offending table.

use std::ops::Range;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;
use toml::Spanned;

use crate::beam::{SsBurstConfig, UeArchitecture};
use crate::channel::{
    generate_synthetic_with, BlockageEventSpec, BlockageScenario, ChannelError, ChannelTrace,
    PathSpec, SyntheticOptions,
};
use crate::engine::SimTime;
use crate::phy::{LinkConfig, McsTable};
use crate::sim::SimParams;
use crate::stack::{CongestionControl, CoreNetwork, TcpConfig};

pub const DEFAULT_SCENARIO: &str = "three_blockers";

/// `(name, document)` for every bundled scenario.
pub const BUNDLED_SCENARIOS: [(&str, &str); 4] = [
    (
        "three_blockers",
        include_str!("../scenarios/three_blockers.toml"),
    ),
    ("static", include_str!("../scenarios/static.toml")),
    (
        "worst_case_analog",
        include_str!("../scenarios/worst_case_analog.toml"),
    ),
    ("deep_outage", include_str!("../scenarios/deep_outage.toml")),
];

pub fn bundled_scenario(name: &str) -> Option<&'static str> {
    BUNDLED_SCENARIOS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, doc)| *doc)
}

pub fn bundled_names() -> Vec<&'static str> {
    BUNDLED_SCENARIOS.iter().map(|(n, _)| *n).collect()
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{}", fmt_located(.line, .message))]
    Invalid {
        line: Option<usize>,
        message: String,
    },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("unknown scenario {name:?}; available: {}", .available.join(", "))]
    UnknownScenario {
        name: String,
        available: Vec<&'static str>,
    },
}

fn fmt_located(line: &Option<usize>, message: &str) -> String {
    match line {
        Some(l) => format!("line {l}: {message}"),
        None => message.to_string(),
    }
}

impl ConfigError {
    fn at(line: Option<usize>, message: impl Into<String>) -> Self {
        ConfigError::Invalid {
            line,
            message: message.into(),
        }
    }

    pub fn line(&self) -> Option<usize> {
        match self {
            ConfigError::Invalid { line, .. } => *line,
            _ => None,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    run: Option<Spanned<RunSection>>,
    channel: Option<Spanned<ChannelSection>>,
    beam: Option<Spanned<BeamSection>>,
    link: Option<Spanned<LinkSection>>,
    stack: Option<Spanned<StackSection>>,
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RunSection {
    architectures: Vec<String>,
    seed: u64,
    window_ms: f64,
    out: String,
    duration_s: Option<f64>,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            architectures: UeArchitecture::ALL
                .iter()
                .map(|a| a.name().to_string())
                .collect(),
            seed: 7,
            window_ms: 100.0,
            out: "out".into(),
            duration_s: None,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ChannelSection {
    trace: Option<String>,
    duration_s: f64,
    sample_interval_ms: f64,
    noise_floor_db: f64,
    noise_std_db: f64,
    paths: Vec<Spanned<PathEntry>>,
    events: Vec<Spanned<EventEntry>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PathEntry {
    tx: usize,
    rx: usize,
    peak_db: f64,
    #[serde(default)]
    spread: usize,
    #[serde(default)]
    rolloff_db: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EventEntry {
    path: usize,
    start_s: f64,
    end_s: f64,
    depth_db: f64,
    #[serde(default)]
    ramp_ms: f64,
}

impl Default for ChannelSection {
    /// No paths or events: filled from the default scenario when both are absent.
    fn default() -> Self {
        ChannelSection {
            trace: None,
            duration_s: 5.6,
            sample_interval_ms: 1.0,
            noise_floor_db: -60.0,
            noise_std_db: 0.0,
            paths: Vec::new(),
            events: Vec::new(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct BeamSection {
    set_period_ms: f64,
    burst_duration_ms: f64,
    n_tx_blocks: usize,
    hysteresis_db: f64,
    measurement_noise_db: f64,
}

impl Default for BeamSection {
    fn default() -> Self {
        BeamSection {
            set_period_ms: 20.0,
            burst_duration_ms: 5.0,
            n_tx_blocks: 12,
            hysteresis_db: 0.0,
            measurement_noise_db: 0.0,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct LinkSection {
    bandwidth_hz: f64,
    peak_sinr_db: f64,
    slot_us: f64,
    overhead: f64,
    harq_processes: usize,
    harq_rtt_slots: u32,
    max_harq_tx: u32,
    ss_symbols: u32,
    symbols_per_slot: u32,
    mcs_table: Option<String>,
}

impl Default for LinkSection {
    fn default() -> Self {
        let d = LinkConfig::default();
        LinkSection {
            bandwidth_hz: d.bandwidth_hz,
            peak_sinr_db: d.peak_sinr_db,
            slot_us: 125.0,
            overhead: d.overhead_fraction,
            harq_processes: d.harq_processes,
            harq_rtt_slots: d.harq_rtt_slots,
            max_harq_tx: d.max_harq_tx,
            ss_symbols: d.ss_symbols,
            symbols_per_slot: d.symbols_per_slot,
            mcs_table: None,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct StackSection {
    rlc_buffer_bytes: u64,
    core_one_way_ms: f64,
    tcp: String,
    mss: u32,
    header_bytes: u32,
    initial_cwnd: u32,
    min_rto_ms: f64,
    initial_rto_ms: f64,
    max_rto_ms: f64,
    receive_window_bytes: u64,
}

impl Default for StackSection {
    fn default() -> Self {
        let t = TcpConfig::default();
        StackSection {
            rlc_buffer_bytes: crate::stack::DEFAULT_RLC_CAPACITY,
            core_one_way_ms: 5.0,
            tcp: "newreno".into(),
            mss: t.mss,
            header_bytes: t.header_bytes,
            initial_cwnd: t.initial_cwnd_segments,
            min_rto_ms: 200.0,
            initial_rto_ms: 1000.0,
            max_rto_ms: 60000.0,
            receive_window_bytes: t.receive_window,
        }
    }
}

/// Where the channel comes from.
#[derive(Debug, Clone)]
pub enum ChannelSource {
    Trace {
        path: PathBuf,
        sample_interval: SimTime,
    },
    Synthetic {
        scenario: BlockageScenario,
        sample_interval: SimTime,
        options: SyntheticOptions,
    },
}

impl ChannelSource {
    pub fn build(&self) -> Result<ChannelTrace, ChannelError> {
        match self {
            ChannelSource::Trace {
                path,
                sample_interval,
            } => ChannelTrace::load(path, *sample_interval),
            ChannelSource::Synthetic {
                scenario,
                sample_interval,
                options,
            } => generate_synthetic_with(scenario, *sample_interval, options),
        }
    }

    pub fn sample_interval(&self) -> SimTime {
        match self {
            ChannelSource::Trace {
                sample_interval, ..
            }
            | ChannelSource::Synthetic {
                sample_interval, ..
            } => *sample_interval,
        }
    }
}

/// Fully resolved configuration of a run or sweep.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub architectures: Vec<UeArchitecture>,
    pub out_dir: PathBuf,
    pub channel: ChannelSource,
    /// Template; `architecture` is set per sweep member.
    pub params: SimParams,
}

impl Default for RunConfig {
    fn default() -> Self {
        let doc = bundled_scenario(DEFAULT_SCENARIO).expect("default scenario is bundled");
        RunConfig::from_toml_str(doc, Path::new(".")).expect("bundled scenario is valid")
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn line(&self, span: Range<usize>) -> Option<usize> {
        Some(line_of(self.text, span.start))
    }

    fn err(&self, span: Range<usize>, msg: impl Into<String>) -> ConfigError {
        ConfigError::at(self.line(span), msg)
    }

    fn millis(
        &self,
        span: &Range<usize>,
        key: &str,
        v: f64,
        allow_zero: bool,
    ) -> Result<SimTime, ConfigError> {
        if !v.is_finite() || v < 0.0 || (!allow_zero && v == 0.0) {
            let need = if allow_zero { ">= 0" } else { "> 0" };
            return Err(self.err(span.clone(), format!("{key} must be {need}, got {v}")));
        }
        Ok(SimTime::from_millis_f64(v))
    }
}

fn section<T: Default>(s: Option<Spanned<T>>) -> (T, Range<usize>) {
    match s {
        Some(s) => {
            let span = s.span();
            (s.into_inner(), span)
        }
        None => (T::default(), 0..0),
    }
}

impl RunConfig {
    /// Parses a config document; relative file paths resolve against `base_dir`.
    pub fn from_toml_str(text: &str, base_dir: &Path) -> Result<Self, ConfigError> {
        let doc: Document = toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| line_of(text, s.start));
            ConfigError::at(line, e.message().trim().to_string())
        })?;
        let cx = Ctx { text };
        let (run, run_span) = section(doc.run);
        let (chan, chan_span) = section(doc.channel);
        let (beam, beam_span) = section(doc.beam);
        let (link, link_span) = section(doc.link);
        let (stack, stack_span) = section(doc.stack);

        let mut architectures = Vec::new();
        for a in &run.architectures {
            let arch: UeArchitecture = a
                .parse()
                .map_err(|e: crate::beam::BeamError| cx.err(run_span.clone(), e.to_string()))?;
            if !architectures.contains(&arch) {
                architectures.push(arch);
            }
        }
        if architectures.is_empty() {
            return Err(cx.err(
                run_span,
                "architectures must list at least one of digital, analog, none",
            ));
        }
        let sample_window = cx.millis(&run_span, "window_ms", run.window_ms, false)?;
        let duration = match run.duration_s {
            Some(s) => Some(cx.millis(&run_span, "duration_s", s * 1e3, false)?),
            None => None,
        };

        let mut channel = channel_source(&cx, chan, chan_span, base_dir)?;
        if let ChannelSource::Synthetic { options, .. } = &mut channel {
            options.seed = run.seed;
        }

        let ss = SsBurstConfig {
            set_period: cx.millis(&beam_span, "set_period_ms", beam.set_period_ms, false)?,
            burst_duration: cx.millis(
                &beam_span,
                "burst_duration_ms",
                beam.burst_duration_ms,
                false,
            )?,
            n_tx_blocks: beam.n_tx_blocks,
        };
        ss.validate()
            .map_err(|e| cx.err(beam_span.clone(), e.to_string()))?;
        for (key, v) in [
            ("hysteresis_db", beam.hysteresis_db),
            ("measurement_noise_db", beam.measurement_noise_db),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(cx.err(beam_span.clone(), format!("{key} must be >= 0, got {v}")));
            }
        }

        let slot = cx.millis(&link_span, "slot_us", link.slot_us / 1e3, false)?;
        let link_cfg = LinkConfig {
            bandwidth_hz: link.bandwidth_hz,
            peak_sinr_db: link.peak_sinr_db,
            slot_duration: slot,
            overhead_fraction: link.overhead,
            harq_processes: link.harq_processes,
            harq_rtt_slots: link.harq_rtt_slots,
            max_harq_tx: link.max_harq_tx,
            ss_symbols: link.ss_symbols,
            symbols_per_slot: link.symbols_per_slot,
        };
        link_cfg
            .validate()
            .map_err(|e| cx.err(link_span.clone(), e.to_string()))?;
        let mcs_table = match &link.mcs_table {
            Some(p) => McsTable::load(&base_dir.join(p))
                .map_err(|e| cx.err(link_span.clone(), format!("mcs_table {p}: {e}")))?,
            None => McsTable::default(),
        };

        let congestion_control = match stack.tcp.to_ascii_lowercase().as_str() {
            "newreno" | "new_reno" | "reno" => CongestionControl::NewReno,
            "cubic" => CongestionControl::Cubic,
            other => {
                return Err(cx.err(
                    stack_span,
                    format!("unknown tcp variant {other:?} (expected newreno or cubic)"),
                ))
            }
        };
        if stack.rlc_buffer_bytes == 0 {
            return Err(cx.err(stack_span, "rlc_buffer_bytes must be > 0"));
        }
        if stack.mss == 0 || stack.initial_cwnd == 0 {
            return Err(cx.err(stack_span, "mss and initial_cwnd must be > 0"));
        }
        if stack.receive_window_bytes < stack.mss as u64 {
            return Err(cx.err(stack_span, "receive_window_bytes must be at least one mss"));
        }
        let min_rto = cx.millis(&stack_span, "min_rto_ms", stack.min_rto_ms, false)?;
        let initial_rto = cx.millis(&stack_span, "initial_rto_ms", stack.initial_rto_ms, false)?;
        let max_rto = cx.millis(&stack_span, "max_rto_ms", stack.max_rto_ms, false)?;
        if min_rto > max_rto {
            return Err(cx.err(stack_span, "min_rto_ms must not exceed max_rto_ms"));
        }
        let tcp = TcpConfig {
            mss: stack.mss,
            header_bytes: stack.header_bytes,
            initial_cwnd_segments: stack.initial_cwnd,
            min_rto,
            initial_rto,
            max_rto,
            receive_window: stack.receive_window_bytes,
            congestion_control,
        };
        let core = CoreNetwork {
            one_way_delay: cx.millis(
                &stack_span,
                "core_one_way_ms",
                stack.core_one_way_ms,
                false,
            )?,
        };

        Ok(RunConfig {
            architectures,
            out_dir: PathBuf::from(run.out),
            channel,
            params: SimParams {
                architecture: UeArchitecture::Digital,
                seed: run.seed,
                duration,
                sample_window,
                ss,
                hysteresis_db: beam.hysteresis_db,
                measurement_noise_db: beam.measurement_noise_db,
                link: link_cfg,
                mcs_table,
                rlc_capacity: stack.rlc_buffer_bytes,
                core,
                tcp,
            },
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml_str(&text, base)
    }

    pub fn bundled(name: &str) -> Result<Self, ConfigError> {
        let doc = bundled_scenario(name).ok_or_else(|| ConfigError::UnknownScenario {
            name: name.to_string(),
            available: bundled_names(),
        })?;
        Self::from_toml_str(doc, Path::new("."))
    }

    /// Parameters of one sweep member.
    pub fn params_for(&self, arch: UeArchitecture) -> SimParams {
        SimParams {
            architecture: arch,
            ..self.params.clone()
        }
    }
}

fn channel_source(
    cx: &Ctx<'_>,
    chan: ChannelSection,
    span: Range<usize>,
    base_dir: &Path,
) -> Result<ChannelSource, ConfigError> {
    let sample_interval = cx.millis(&span, "sample_interval_ms", chan.sample_interval_ms, false)?;
    if let Some(trace) = chan.trace {
        if !chan.paths.is_empty() || !chan.events.is_empty() {
            return Err(cx.err(
                span,
                "give either a trace file or synthetic paths/events, not both",
            ));
        }
        let path = base_dir.join(&trace);
        if !path.is_file() {
            return Err(cx.err(
                span,
                format!("trace file {} does not exist", path.display()),
            ));
        }
        return Ok(ChannelSource::Trace {
            path,
            sample_interval,
        });
    }
    if chan.paths.is_empty() {
        if !chan.events.is_empty() {
            return Err(cx.err(span, "events given without any paths"));
        }
        let default = RunConfig::default();
        return Ok(default.channel);
    }

    let mut paths = Vec::new();
    for p in chan.paths {
        let sp = p.span();
        let p = p.into_inner();
        let built = PathSpec {
            tx_index: p.tx,
            rx_index: p.rx,
            peak_power_db: p.peak_db,
            angular_spread: p.spread,
            spread_rolloff_db: p.rolloff_db,
        };
        let probe = BlockageScenario {
            duration: SimTime::from_secs(1),
            paths: vec![built.clone()],
            events: vec![],
        };
        probe.validate().map_err(|e| cx.err(sp, strip_index(&e)))?;
        paths.push(built);
    }
    let duration = cx.millis(&span, "duration_s", chan.duration_s * 1e3, false)?;
    let mut scenario = BlockageScenario {
        duration,
        paths,
        events: Vec::new(),
    };
    for e in chan.events {
        let sp = e.span();
        let e = e.into_inner();
        let built = BlockageEventSpec {
            path_id: e.path,
            start: cx.millis(&sp, "start_s", e.start_s * 1e3, true)?,
            end: cx.millis(&sp, "end_s", e.end_s * 1e3, false)?,
            depth_db: e.depth_db,
            ramp: cx.millis(&sp, "ramp_ms", e.ramp_ms, true)?,
        };
        let probe = BlockageScenario {
            events: vec![built.clone()],
            ..scenario.clone()
        };
        probe
            .validate()
            .map_err(|err| cx.err(sp, strip_index(&err)))?;
        scenario.events.push(built);
    }
    if !chan.noise_floor_db.is_finite() || !chan.noise_std_db.is_finite() || chan.noise_std_db < 0.0
    {
        return Err(cx.err(span, "noise_floor_db must be finite and noise_std_db >= 0"));
    }
    Ok(ChannelSource::Synthetic {
        scenario,
        sample_interval,
        options: SyntheticOptions {
            noise_floor_db: chan.noise_floor_db,
            noise_std_db: chan.noise_std_db,
            seed: 0,
        },
    })
}

/// Drops the "event 0: " style prefix from single-item probe validation.
fn strip_index(e: &ChannelError) -> String {
    let s = e.to_string();
    for prefix in ["path 0: ", "event 0: "] {
        if let Some(i) = s.find(prefix) {
            return format!("{}{}", &s[..i], &s[i + prefix.len()..]);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_scenarios_parse() {
        for (name, _) in BUNDLED_SCENARIOS {
            let cfg = RunConfig::bundled(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(cfg.architectures, UeArchitecture::ALL.to_vec());
            cfg.channel.build().unwrap();
        }
    }

    #[test]
    fn empty_document_is_the_default_scenario() {
        let empty = RunConfig::from_toml_str("", Path::new(".")).unwrap();
        let def = RunConfig::bundled(DEFAULT_SCENARIO).unwrap();
        assert_eq!(
            empty.channel.build().unwrap().matrices(),
            def.channel.build().unwrap().matrices()
        );
        assert_eq!(empty.params.sample_window, SimTime::from_millis(100));
        assert_eq!(empty.params.ss, SsBurstConfig::default());
        assert_eq!(empty.params.link, LinkConfig::default());
        assert_eq!(empty.params.tcp, TcpConfig::default());
        assert_eq!(empty.params.core, CoreNetwork::default());
        assert_eq!(empty.params.rlc_capacity, 5 << 20);
        assert_eq!(empty.params.seed, def.params.seed);
    }

    #[test]
    fn default_scenario_structure() {
        let ChannelSource::Synthetic { scenario, .. } = RunConfig::default().channel else {
            panic!("default channel is synthetic");
        };
        assert_eq!(scenario.duration, SimTime::from_millis(5600));
        assert_eq!(scenario.paths.len(), 2);
        assert_eq!(
            (scenario.paths[1].tx_index, scenario.paths[1].rx_index),
            (4, 7)
        );
        assert_eq!(scenario.paths[1].peak_power_db, -9.0);
        let windows: Vec<_> = scenario
            .events
            .iter()
            .map(|e| {
                (
                    e.start.as_nanos() / 1_000_000,
                    e.end.as_nanos() / 1_000_000,
                    e.depth_db,
                )
            })
            .collect();
        assert_eq!(
            windows,
            vec![(2000, 3000, 14.0), (3200, 3300, 14.0), (3400, 3600, 14.0)]
        );
    }

    #[test]
    fn syntax_error_has_line() {
        let text = "[run]\nseed = 7\nwindow_ms = = 3\n";
        let e = RunConfig::from_toml_str(text, Path::new(".")).unwrap_err();
        assert_eq!(e.line(), Some(3), "{e}");
    }

    #[test]
    fn unknown_key_has_line() {
        let text = "[run]\nseed = 7\n\n[link]\nbandwith_hz = 1e9\n";
        let e = RunConfig::from_toml_str(text, Path::new(".")).unwrap_err();
        assert_eq!(e.line(), Some(5), "{e}");
        assert!(e.to_string().contains("bandwith_hz"));
    }

    #[test]
    fn semantic_error_points_at_event() {
        let text = "\
[channel]
duration_s = 1.0

[[channel.paths]]
tx = 0
rx = 0
peak_db = 0.0

[[channel.events]]
path = 0
start_s = 0.2
end_s = 0.3
depth_db = 10.0
ramp_ms = 80.0
";
        let e = RunConfig::from_toml_str(text, Path::new(".")).unwrap_err();
        let msg = e.to_string();
        assert_eq!(e.line(), Some(9), "{msg}");
        assert!(msg.contains("ramp"), "{msg}");
    }

    #[test]
    fn bad_architecture_reported() {
        let e = RunConfig::from_toml_str("[run]\narchitectures = [\"hybrid\"]\n", Path::new("."))
            .unwrap_err();
        assert!(e.to_string().contains("hybrid"));
        assert!(e.line().is_some());
    }

    #[test]
    fn missing_trace_file_reported() {
        let dir = tempfile::tempdir().unwrap();
        let e =
            RunConfig::from_toml_str("[channel]\ntrace = \"nope.csv\"\n", dir.path()).unwrap_err();
        assert!(e.to_string().contains("nope.csv"));
    }

    #[test]
    fn unknown_bundled_name_lists_available() {
        let e = RunConfig::bundled("nope").unwrap_err();
        let msg = e.to_string();
        for n in bundled_names() {
            assert!(msg.contains(n));
        }
    }
}

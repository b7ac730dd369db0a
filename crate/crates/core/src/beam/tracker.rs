use super::{
    analog_rx_direction, select_beam_pair_with_margin, ss_block_schedule, BeamPair,
    MeasurementStore, SsBurstConfig, UeArchitecture,
};
use crate::channel::{ChannelError, ChannelTrace, CODEBOOK_SIZE};
use crate::engine::{SimRng, SimTime};

/// Gaussian error added to each SS measurement.
#[derive(Debug, Clone)]
pub struct MeasurementNoise {
    pub rng: SimRng,
    pub std_db: f64,
}

impl MeasurementNoise {
    fn draw(&mut self) -> f64 {
        self.rng.gaussian(self.std_db)
    }
}

/// Processes one SS block carrying `tx` at time `t`.
pub fn measure_block(
    arch: UeArchitecture,
    store: &mut MeasurementStore,
    trace: &ChannelTrace,
    t: SimTime,
    tx: usize,
    burst_set_index: u64,
    mut noise: Option<&mut MeasurementNoise>,
) -> Result<(), ChannelError> {
    let full_scan = match arch {
        UeArchitecture::Digital => true,
        UeArchitecture::NoTracking if burst_set_index == 0 => true,
        UeArchitecture::NoTracking => return Ok(()),
        UeArchitecture::Analog => false,
    };
    let m = trace.sample_at(t)?;
    let mut record = |rx: usize| {
        let pair = BeamPair::new(tx, rx).expect("indices within codebook");
        let n = noise.as_deref_mut().map_or(0.0, MeasurementNoise::draw);
        store.record(pair, m.at(pair) + n, t);
    };
    if full_scan {
        (0..CODEBOOK_SIZE).for_each(&mut record);
    } else {
        record(analog_rx_direction(burst_set_index));
    }
    Ok(())
}

/// Applies every SS block of one burst set to `store`.
pub fn acquire_measurements(
    arch: UeArchitecture,
    store: &mut MeasurementStore,
    trace: &ChannelTrace,
    cfg: &SsBurstConfig,
    burst_start: SimTime,
    burst_set_index: u64,
) -> Result<(), ChannelError> {
    for (t, tx) in ss_block_schedule(cfg, burst_start) {
        measure_block(arch, store, trace, t, tx, burst_set_index, None)?;
    }
    Ok(())
}

/// Beam-tracking state of one UE: its measurement store and active pair.
#[derive(Debug, Clone)]
pub struct BeamTracker {
    arch: UeArchitecture,
    hysteresis_db: f64,
    store: MeasurementStore,
    active: BeamPair,
    noise: Option<MeasurementNoise>,
    switches: u64,
}

impl BeamTracker {
    /// Runs initial access: a complete scan of all 144 combinations at `t`,
    /// after which the strongest pair is active.
    pub fn initial_access(
        arch: UeArchitecture,
        trace: &ChannelTrace,
        t: SimTime,
        hysteresis_db: f64,
        mut noise: Option<MeasurementNoise>,
    ) -> Result<Self, ChannelError> {
        let mut store = MeasurementStore::new();
        let m = trace.sample_at(t)?;
        for pair in BeamPair::all() {
            let n = noise.as_mut().map_or(0.0, MeasurementNoise::draw);
            store.record(pair, m.at(pair) + n, t);
        }
        let origin = BeamPair::new(0, 0).expect("origin pair");
        let active =
            select_beam_pair_with_margin(&store, origin, 0.0).expect("store fully measured");
        Ok(BeamTracker {
            arch,
            hysteresis_db,
            store,
            active,
            noise,
            switches: 0,
        })
    }

    pub fn architecture(&self) -> UeArchitecture {
        self.arch
    }

    pub fn active(&self) -> BeamPair {
        self.active
    }

    pub fn store(&self) -> &MeasurementStore {
        &self.store
    }

    pub fn switches(&self) -> u64 {
        self.switches
    }

    pub fn on_ss_block(
        &mut self,
        trace: &ChannelTrace,
        t: SimTime,
        tx: usize,
        burst_set_index: u64,
    ) -> Result<(), ChannelError> {
        measure_block(
            self.arch,
            &mut self.store,
            trace,
            t,
            tx,
            burst_set_index,
            self.noise.as_mut(),
        )
    }

    /// Re-evaluates the pair at the end of a burst set. Returns the new pair on a switch.
    pub fn on_burst_end(&mut self) -> Option<BeamPair> {
        if self.arch == UeArchitecture::NoTracking {
            return None;
        }
        let next = select_beam_pair_with_margin(&self.store, self.active, self.hysteresis_db)
            .unwrap_or(self.active);
        if next != self.active {
            self.active = next;
            self.switches += 1;
            Some(next)
        } else {
            None
        }
    }
}

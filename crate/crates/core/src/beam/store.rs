use super::{BeamError, BeamPair};
use crate::channel::PAC_COUNT;
use crate::engine::SimTime;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurement {
    pub power_db: f64,
    pub measured_at: SimTime,
}

/// A node's possibly stale view of per-PAC received power.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementStore {
    entries: [Option<Measurement>; PAC_COUNT],
}

impl Default for MeasurementStore {
    fn default() -> Self {
        Self::new()
    }
}

impl MeasurementStore {
    pub fn new() -> Self {
        MeasurementStore {
            entries: [None; PAC_COUNT],
        }
    }

    fn idx(pair: BeamPair) -> usize {
        pair.tx() * crate::channel::CODEBOOK_SIZE + pair.rx()
    }

    pub fn get(&self, pair: BeamPair) -> Option<Measurement> {
        self.entries[Self::idx(pair)]
    }

    pub fn record(&mut self, pair: BeamPair, power_db: f64, measured_at: SimTime) {
        self.entries[Self::idx(pair)] = Some(Measurement {
            power_db,
            measured_at,
        });
    }

    pub fn measured_count(&self) -> usize {
        self.entries.iter().filter(|e| e.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.measured_count() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = (BeamPair, Measurement)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter_map(|(i, m)| m.map(|m| (BeamPair::from_flat(i), m)))
    }

    /// Latest measurement timestamp in the store.
    pub fn newest(&self) -> Option<SimTime> {
        self.iter().map(|(_, m)| m.measured_at).max()
    }
}

/// Switch-on-strictly-stronger selection (no hysteresis).
pub fn select_beam_pair(
    store: &MeasurementStore,
    current: BeamPair,
) -> Result<BeamPair, BeamError> {
    select_beam_pair_with_margin(store, current, 0.0)
}

/// Picks the strongest measured pair. `current` is kept unless some entry
/// beats its stored power by more than `margin_db`; among equal maxima the
/// lowest `(tx, rx)` wins. An unmeasured `current` never blocks a switch.
pub fn select_beam_pair_with_margin(
    store: &MeasurementStore,
    current: BeamPair,
    margin_db: f64,
) -> Result<BeamPair, BeamError> {
    let mut best: Option<(BeamPair, f64)> = None;
    for (pair, m) in store.iter() {
        // strict comparison keeps the lexicographically first maximum
        if best.is_none_or(|(_, p)| m.power_db > p) {
            best = Some((pair, m.power_db));
        }
    }
    let (best_pair, best_power) = best.ok_or(BeamError::EmptyStore)?;
    match store.get(current) {
        Some(cur) if best_power <= cur.power_db + margin_db => Ok(current),
        _ => Ok(best_pair),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(tx: usize, rx: usize) -> BeamPair {
        BeamPair::new(tx, rx).unwrap()
    }

    #[test]
    fn single_entry() {
        let mut s = MeasurementStore::new();
        s.record(p(3, 5), -2.0, SimTime::ZERO);
        assert_eq!(select_beam_pair(&s, p(0, 0)).unwrap(), p(3, 5));
    }

    #[test]
    fn equal_power_keeps_current() {
        let mut s = MeasurementStore::new();
        s.record(p(0, 0), -5.0, SimTime::ZERO);
        s.record(p(4, 7), -5.0, SimTime::ZERO);
        assert_eq!(select_beam_pair(&s, p(0, 0)).unwrap(), p(0, 0));
        assert_eq!(select_beam_pair(&s, p(4, 7)).unwrap(), p(4, 7));
        // current unmeasured: lowest pair among the maxima
        assert_eq!(select_beam_pair(&s, p(9, 9)).unwrap(), p(0, 0));
    }

    #[test]
    fn strictly_stronger_switches() {
        let mut s = MeasurementStore::new();
        s.record(p(0, 0), -5.0, SimTime::ZERO);
        s.record(p(4, 7), -4.999, SimTime::ZERO);
        assert_eq!(select_beam_pair(&s, p(0, 0)).unwrap(), p(4, 7));
    }

    #[test]
    fn hysteresis_margin() {
        let mut s = MeasurementStore::new();
        s.record(p(0, 0), -5.0, SimTime::ZERO);
        s.record(p(4, 7), -3.0, SimTime::ZERO);
        assert_eq!(
            select_beam_pair_with_margin(&s, p(0, 0), 2.0).unwrap(),
            p(0, 0)
        );
        assert_eq!(
            select_beam_pair_with_margin(&s, p(0, 0), 1.9).unwrap(),
            p(4, 7)
        );
    }

    #[test]
    fn empty_store_errors() {
        let s = MeasurementStore::new();
        assert_eq!(select_beam_pair(&s, p(0, 0)), Err(BeamError::EmptyStore));
    }

    #[test]
    fn unmeasured_entries_never_win() {
        let mut s = MeasurementStore::new();
        s.record(p(11, 11), -59.0, SimTime::ZERO);
        assert_eq!(select_beam_pair(&s, p(0, 0)).unwrap(), p(11, 11));
        assert_eq!(s.measured_count(), 1);
    }
}

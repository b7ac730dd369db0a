use proptest::prelude::*;

use mmwsim::beam::{select_beam_pair, BeamPair, MeasurementStore};
use mmwsim::channel::{
    generate_synthetic, BlockageEventSpec, BlockageScenario, ChannelTrace, PathSpec, PowerMatrix,
};
use mmwsim::engine::SimTime;
use mmwsim::phy::{select_mcs, slot_capacity, LinkConfig, McsTable};

const FLOOR: f64 = -60.0;

fn path() -> impl Strategy<Value = PathSpec> {
    (
        0usize..12,
        0usize..12,
        -20.0f64..0.0,
        0usize..3,
        0.0f64..10.0,
    )
        .prop_map(|(tx, rx, peak, spread, rolloff)| PathSpec {
            tx_index: tx,
            rx_index: rx,
            peak_power_db: peak,
            angular_spread: spread,
            spread_rolloff_db: rolloff,
        })
}

fn event(n_paths: usize) -> impl Strategy<Value = BlockageEventSpec> {
    (0..n_paths, 0u64..400, 10u64..300, 0.0f64..40.0, 0u64..=100).prop_map(
        |(path_id, start, len, depth, ramp_pct)| BlockageEventSpec {
            path_id,
            start: SimTime::from_millis(start),
            end: SimTime::from_millis(start + len),
            depth_db: depth,
            ramp: SimTime::from_micros(len * 1000 * ramp_pct / 200),
        },
    )
}

fn scenario() -> impl Strategy<Value = BlockageScenario> {
    prop::collection::vec(path(), 1..4).prop_flat_map(|paths| {
        let n = paths.len();
        prop::collection::vec(event(n), 0..4).prop_map(move |events| BlockageScenario {
            duration: SimTime::from_millis(800),
            paths: paths.clone(),
            events,
        })
    })
}

fn store() -> impl Strategy<Value = MeasurementStore> {
    prop::collection::vec(prop::option::of(-40i32..=0), 144).prop_map(|vals| {
        let mut s = MeasurementStore::new();
        for (p, v) in BeamPair::all().zip(vals) {
            if let Some(v) = v {
                s.record(p, v as f64, SimTime::ZERO);
            }
        }
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn synthetic_values_are_bounded(sc in scenario()) {
        let tr = generate_synthetic(&sc, SimTime::from_millis(4)).unwrap();
        let top = sc.paths.iter().map(|p| p.peak_power_db).fold(f64::MIN, f64::max);
        for m in tr.matrices() {
            for &v in m.as_row_major() {
                prop_assert!(v.is_finite());
                prop_assert!(v >= FLOOR - 1e-9, "{v}");
                prop_assert!(v <= top + 1e-9, "{v} above strongest peak {top}");
            }
        }
    }

    #[test]
    fn deeper_events_never_raise_power(sc in scenario(), extra in 0.0f64..20.0) {
        prop_assume!(!sc.events.is_empty());
        let mut deeper = sc.clone();
        deeper.events[0].depth_db += extra;
        let dt = SimTime::from_millis(4);
        let a = generate_synthetic(&sc, dt).unwrap();
        let b = generate_synthetic(&deeper, dt).unwrap();
        for (ma, mb) in a.matrices().iter().zip(b.matrices()) {
            for (x, y) in ma.as_row_major().iter().zip(mb.as_row_major()) {
                prop_assert!(y <= x, "{y} > {x}");
            }
        }
    }

    #[test]
    fn sample_at_is_zero_order_hold(n in 1usize..20, interval_us in 100u64..5000, probe in 0.0f64..1.0) {
        let dt = SimTime::from_micros(interval_us);
        let mats: Vec<_> = (0..n).map(|k| PowerMatrix::filled(-(k as f64))).collect();
        let tr = ChannelTrace::new(dt, mats).unwrap();
        let t = SimTime::from_nanos((probe * tr.duration().as_nanos() as f64) as u64).min(tr.duration() - SimTime::from_nanos(1));
        let k = t.div_floor(dt) as usize;
        prop_assert_eq!(tr.sample_at(t).unwrap().get(0, 0), -(k as f64));
        prop_assert_eq!(tr.sample_at(dt.mul(k as u64)).unwrap().get(3, 3), -(k as f64));
    }

    #[test]
    fn selection_ignores_a_common_offset(s in store(), offset in -30i32..30, tx in 0usize..12, rx in 0usize..12) {
        prop_assume!(!s.is_empty());
        let cur = BeamPair::new(tx, rx).unwrap();
        let mut shifted = MeasurementStore::new();
        for (p, m) in s.iter() {
            shifted.record(p, m.power_db + offset as f64, m.measured_at);
        }
        prop_assert_eq!(select_beam_pair(&s, cur).unwrap(), select_beam_pair(&shifted, cur).unwrap());
    }

    #[test]
    fn selection_is_a_maximum(s in store(), tx in 0usize..12, rx in 0usize..12) {
        prop_assume!(!s.is_empty());
        let cur = BeamPair::new(tx, rx).unwrap();
        let chosen = select_beam_pair(&s, cur).unwrap();
        let best = s.get(chosen).unwrap().power_db;
        prop_assert!(s.iter().all(|(_, m)| m.power_db <= best));
    }

    #[test]
    fn rate_is_monotone_in_sinr(a in -15.0f64..35.0, b in -15.0f64..35.0, ss in any::<bool>()) {
        let table = McsTable::default();
        let cfg = LinkConfig::default();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let cap = |s| slot_capacity(select_mcs(s, &table).as_ref(), &cfg, ss);
        prop_assert!(cap(lo) <= cap(hi));
        let m = select_mcs(hi, &table);
        prop_assert!(slot_capacity(m.as_ref(), &cfg, true) <= slot_capacity(m.as_ref(), &cfg, false));
    }
}

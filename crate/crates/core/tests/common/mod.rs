#![allow(dead_code)]

use mmwsim::beam::UeArchitecture;
use mmwsim::channel::ChannelTrace;
use mmwsim::config::RunConfig;
use mmwsim::engine::SimTime;
use mmwsim::sim::{simulate, SimOutcome};
use mmwsim::stack::{record, CsvRecord};

pub fn ms(v: u64) -> SimTime {
    SimTime::from_millis(v)
}

pub fn bundled(name: &str) -> (RunConfig, ChannelTrace) {
    let cfg = RunConfig::bundled(name).expect("bundled scenario parses");
    let trace = cfg.channel.build().expect("bundled channel builds");
    (cfg, trace)
}

pub fn run_arch(
    cfg: &RunConfig,
    trace: &ChannelTrace,
    arch: UeArchitecture,
    window: Option<SimTime>,
) -> SimOutcome {
    let mut p = cfg.params_for(arch);
    if let Some(w) = window {
        p.sample_window = w;
    }
    simulate(trace, &p).expect("simulation runs")
}

/// The outcome's rows as they appear in the emitted CSV.
pub fn csv_rows(o: &SimOutcome) -> Vec<CsvRecord> {
    let mut buf = Vec::new();
    record::write_csv(&o.rows, &mut buf).unwrap();
    record::read_csv(buf.as_slice()).unwrap()
}

pub fn row_time(r: &CsvRecord) -> SimTime {
    SimTime::from_secs_f64(r.t_s)
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Byte reconciliations every run must satisfy. Returns a description of the first violation.
pub fn check_conservation(o: &SimOutcome) -> Result<(), String> {
    let h = o.harq;
    if h.offered_bytes != h.delivered_bytes + h.surrendered_bytes + o.harq_in_flight_bytes {
        return Err(format!(
            "PHY: offered {} != delivered {} + surrendered {} + in flight {}",
            h.offered_bytes, h.delivered_bytes, h.surrendered_bytes, o.harq_in_flight_bytes
        ));
    }
    let r = o.rlc;
    if r.accepted_bytes + r.requeued_bytes
        != r.served_new_bytes + r.served_retx_bytes + o.rlc_occupancy
    {
        return Err(format!(
            "RLC: accepted {} + requeued {} != served {} + {} + queued {}",
            r.accepted_bytes,
            r.requeued_bytes,
            r.served_new_bytes,
            r.served_retx_bytes,
            o.rlc_occupancy
        ));
    }
    if r.served_new_bytes + r.served_retx_bytes != h.offered_bytes {
        return Err(format!(
            "RLC served {} != PHY offered {}",
            r.served_new_bytes + r.served_retx_bytes,
            h.offered_bytes
        ));
    }
    if h.surrendered_bytes != r.requeued_bytes {
        return Err(format!(
            "HARQ surrendered {} != RLC requeued {}",
            h.surrendered_bytes, r.requeued_bytes
        ));
    }
    if h.delivered_bytes != o.ue_rlc.received_bytes + o.decoded_in_transit_bytes {
        return Err(format!(
            "PHY delivered {} != UE RLC received {} + in transit {}",
            h.delivered_bytes, o.ue_rlc.received_bytes, o.decoded_in_transit_bytes
        ));
    }
    if o.ue_rlc.received_bytes != o.ue_rlc.delivered_bytes + o.ue_rlc_buffered_bytes {
        return Err(format!(
            "UE RLC received {} != released {} + buffered {}",
            o.ue_rlc.received_bytes, o.ue_rlc.delivered_bytes, o.ue_rlc_buffered_bytes
        ));
    }
    if !(o.tcp_acked_bytes <= o.ue_payload_bytes && o.ue_payload_bytes <= o.tcp.bytes_sent) {
        return Err(format!(
            "TCP: acked {} <= delivered {} <= offered {} violated",
            o.tcp_acked_bytes, o.ue_payload_bytes, o.tcp.bytes_sent
        ));
    }
    if o.tcp_receiver.goodput_bytes < o.tcp_acked_bytes {
        return Err("TCP receiver goodput below acknowledged bytes".into());
    }
    Ok(())
}

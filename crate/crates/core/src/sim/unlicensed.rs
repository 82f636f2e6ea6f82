//! The unlicensed channel: WLAN contention plus the SBS's mute/sense/transmit cycle.

use std::collections::BTreeSet;

use rand::Rng;

use super::dcf::{wifi_dcf_step, DcfState, SlotOutcome};
use super::trace::{ChannelState, Nanos, Recorder, WifiFrame};

/// Durations on the unlicensed channel, ns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Timing {
    pub slot: Nanos,
    /// Whole exchange: data, SIFS, ACK and the trailing DIFS.
    pub busy: Nanos,
    pub difs: Nanos,
    pub delta: Nanos,
    pub cts: Nanos,
    pub max_occupancy: Nanos,
    pub subframe: Nanos,
    pub payload_bits: f64,
}

impl Timing {
    /// End of RF activity within an exchange that starts at `t`.
    fn rf_end(&self, t: Nanos) -> Nanos {
        t + self.busy - self.difs
    }
}

/// What happened on the unlicensed channel during one epoch.
#[derive(Debug, Clone, Default)]
pub(crate) struct EpochUnlicensed {
    pub target: Nanos,
    pub laa_start: Option<Nanos>,
    pub stolen: Nanos,
    pub laa_tx: Nanos,
    pub muted_observed: Nanos,
    pub muted_busy: Nanos,
    pub senders: BTreeSet<u32>,
    pub sta_bits: Vec<f64>,
}

pub(crate) struct UnlicensedChannel {
    pub dcf: DcfState,
    pub rec: Recorder,
    pub frames: Vec<WifiFrame>,
    pub laa_bursts: Vec<(Nanos, Nanos)>,
    timing: Timing,
    last_rf_end: Nanos,
}

impl UnlicensedChannel {
    pub fn new(dcf: DcfState, timing: Timing, record_segments: bool) -> Self {
        Self {
            dcf,
            rec: Recorder::new(record_segments),
            frames: Vec::new(),
            laa_bursts: Vec::new(),
            timing,
            last_rf_end: 0,
        }
    }

    /// Runs WLAN contention until the next virtual slot would start at or after `until`.
    fn contend(&mut self, until: Nanos, sta_bits: &mut [f64], rng: &mut impl Rng) {
        let tm = self.timing;
        while self.rec.cursor < until {
            let t = self.rec.cursor;
            match wifi_dcf_step(&mut self.dcf, t, rng) {
                SlotOutcome::Idle => self.rec.push(t + tm.slot, ChannelState::Idle, None, 0.0),
                SlotOutcome::Success(w) => {
                    self.rec.push(
                        t + tm.busy,
                        ChannelState::WifiSuccess,
                        Some(w),
                        tm.payload_bits,
                    );
                    sta_bits[w as usize] += tm.payload_bits;
                    self.frames.push(WifiFrame {
                        start: t,
                        rf_end: tm.rf_end(t),
                        success: true,
                    });
                    self.last_rf_end = tm.rf_end(t);
                }
                SlotOutcome::Collision(_) => {
                    self.rec
                        .push(t + tm.busy, ChannelState::WifiCollision, None, 0.0);
                    self.frames.push(WifiFrame {
                        start: t,
                        rf_end: tm.rf_end(t),
                        success: false,
                    });
                    self.last_rf_end = tm.rf_end(t);
                }
            }
        }
    }

    /// One epoch `[start, end)` with the SBS muted for `muted_subframes`.
    ///
    /// The SBS senses for `delta` before its muted period expires. If the
    /// channel was idle throughout it starts at the target; otherwise it
    /// waits for the ongoing exchange to end, senses `delta` of silence
    /// (shorter than DIFS, so no STA can get in first) and reserves the rest
    /// of the epoch with a CTS. Transmissions are cut into bursts of at most
    /// `max_occupancy`, each preceded by another `delta` of sensing.
    pub fn run_epoch(
        &mut self,
        start: Nanos,
        end: Nanos,
        muted_subframes: u32,
        rng: &mut impl Rng,
    ) -> EpochUnlicensed {
        let tm = self.timing;
        let n_sta = self.dcf.stations.len();
        let mut out = EpochUnlicensed {
            sta_bits: vec![0.0; n_sta],
            ..Default::default()
        };
        self.rec.flush_before(start);

        let target = start + (Nanos::from(muted_subframes) * tm.subframe).max(tm.delta);
        let sense_from = target - tm.delta;
        out.target = target;
        self.contend(target, &mut out.sta_bits, rng);

        // What the SBS heard while muted, before its own sensing window.
        out.muted_observed = sense_from - start;
        out.muted_busy = self.rec.wifi_time_between(start, sense_from);
        out.senders = self.rec.senders_between(start, sense_from);

        let busy = self.last_rf_end > sense_from;
        let tx_start = if busy {
            let s = self.last_rf_end + tm.delta;
            if s + tm.cts >= end {
                // No room left: the WLAN keeps the channel for the whole epoch.
                self.contend(end, &mut out.sta_bits, rng);
                out.stolen = end - target;
                return out;
            }
            self.rec.truncate(self.last_rf_end);
            self.rec.push(s, ChannelState::LaaSensing, None, 0.0);
            self.rec.push(s + tm.cts, ChannelState::Cts, None, 0.0);
            s + tm.cts
        } else {
            self.rec.truncate(sense_from);
            self.rec.push(target, ChannelState::LaaSensing, None, 0.0);
            target
        };
        out.laa_start = Some(tx_start);
        out.stolen = tx_start - target;

        let mut burst_start = tx_start;
        loop {
            let burst_end = (burst_start + tm.max_occupancy).min(end);
            self.rec.push(burst_end, ChannelState::LaaTx, None, 0.0);
            self.laa_bursts.push((burst_start, burst_end));
            out.laa_tx += burst_end - burst_start;
            if burst_end >= end {
                break;
            }
            let sensed = burst_end + tm.delta;
            if sensed >= end {
                self.rec.push(end, ChannelState::LaaSensing, None, 0.0);
                break;
            }
            self.rec.push(sensed, ChannelState::LaaSensing, None, 0.0);
            burst_start = sensed;
        }
        // STAs need a DIFS of silence before their backoff resumes.
        self.rec.push(end + tm.difs, ChannelState::Idle, None, 0.0);
        out
    }
}

//! Channel-occupancy ledger of one simulated run.

use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::balancer::Decision;
use crate::error::Result;

/// Nanoseconds on the run's global timeline.
pub type Nanos = u64;

pub const NS_PER_S: f64 = 1e9;

pub fn secs_to_ns(s: f64) -> Nanos {
    (s * NS_PER_S).round() as Nanos
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelState {
    Idle,
    WifiSuccess,
    WifiCollision,
    LaaTx,
    LaaSensing,
    Cts,
}

impl ChannelState {
    pub const ALL: [ChannelState; 6] = [
        ChannelState::Idle,
        ChannelState::WifiSuccess,
        ChannelState::WifiCollision,
        ChannelState::LaaTx,
        ChannelState::LaaSensing,
        ChannelState::Cts,
    ];

    pub fn is_wifi(self) -> bool {
        matches!(
            self,
            ChannelState::WifiSuccess | ChannelState::WifiCollision
        )
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ChannelState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChannelState::Idle => "idle",
            ChannelState::WifiSuccess => "wifi_success",
            ChannelState::WifiCollision => "wifi_collision",
            ChannelState::LaaTx => "laa_tx",
            ChannelState::LaaSensing => "laa_sensing",
            ChannelState::Cts => "cts",
        })
    }
}

/// A maximal interval of one channel state on the unlicensed channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub start: Nanos,
    pub end: Nanos,
    pub state: ChannelState,
    /// Sending STA for successes; `None` otherwise.
    pub node: Option<u32>,
    /// Payload delivered by this segment.
    pub bits: f64,
}

/// One WiFi exchange; `rf_end` is when the ACK (or the colliding frames) ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WifiFrame {
    pub start: Nanos,
    pub rf_end: Nanos,
    pub success: bool,
}

/// Per-epoch bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub start: Nanos,
    pub decision: Decision,
    pub muted_subframes: u32,
    pub licensed_subframes: u32,
    /// When the SBS planned to start transmitting on the unlicensed channel.
    pub target: Nanos,
    /// When it actually started, if it did.
    pub laa_start: Option<Nanos>,
    /// Time taken from the LAA share by WLAN activity at the target.
    pub stolen: Nanos,
    /// Portion of the muted window observed, and the WLAN-busy part of it.
    pub muted_observed: Nanos,
    pub muted_busy: Nanos,
    /// STAs seen completing a frame during the muted window.
    pub senders: BTreeSet<u32>,
    /// Mean MBS resource-block usage over the epoch's subframes.
    pub rb_usage: f64,
    pub mue_bits: Vec<f64>,
    pub sue_licensed_bits: Vec<f64>,
    pub sue_unlicensed_bits: Vec<f64>,
    pub sta_bits: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SimTrace {
    /// Ordered, contiguous partition of `[0, end)`; empty unless segment
    /// recording was enabled.
    pub segments: Vec<Segment>,
    pub frames: Vec<WifiFrame>,
    /// Contiguous LAA transmissions as `(start, end)`.
    pub laa_bursts: Vec<(Nanos, Nanos)>,
    pub epochs: Vec<EpochRecord>,
    /// Time spent in each [`ChannelState`], indexed in `ChannelState::ALL` order.
    pub airtime: [Nanos; 6],
    pub end: Nanos,
}

impl SimTrace {
    pub fn airtime_of(&self, state: ChannelState) -> Nanos {
        self.airtime[state.index()]
    }

    /// Fraction of the run the SBS spent transmitting data on the unlicensed channel.
    pub fn laa_airtime_share(&self) -> f64 {
        self.airtime_of(ChannelState::LaaTx) as f64 / self.end.max(1) as f64
    }

    /// `t_us,state,node_id,bits` lines, one per segment.
    pub fn write_dump(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "t_us,state,node_id,bits")?;
        for s in &self.segments {
            let node = s.node.map(|n| n.to_string()).unwrap_or_default();
            writeln!(
                out,
                "{:.3},{},{},{}",
                s.start as f64 / 1e3,
                s.state,
                node,
                s.bits
            )?;
        }
        Ok(())
    }
}

/// Builds the segment partition, merging adjacent idle stretches. Segments
/// stay pending (and may have their tails cut) until flushed.
#[derive(Debug)]
pub(crate) struct Recorder {
    record_segments: bool,
    segments: Vec<Segment>,
    airtime: [Nanos; 6],
    /// End of everything recorded so far.
    pub cursor: Nanos,
    pending: Vec<Segment>,
}

impl Recorder {
    pub fn new(record_segments: bool) -> Self {
        Self {
            record_segments,
            segments: Vec::new(),
            airtime: [0; 6],
            cursor: 0,
            pending: Vec::new(),
        }
    }

    /// Appends `[cursor, end)` in `state`. Empty intervals are dropped.
    pub fn push(&mut self, end: Nanos, state: ChannelState, node: Option<u32>, bits: f64) {
        if end <= self.cursor {
            return;
        }
        let start = self.cursor;
        self.cursor = end;
        if let Some(prev) = self.pending.last_mut() {
            if prev.state == ChannelState::Idle && state == ChannelState::Idle {
                prev.end = end;
                return;
            }
        }
        self.pending.push(Segment {
            start,
            end,
            state,
            node,
            bits,
        });
    }

    /// Drops everything recorded after `at`, so the next push starts there.
    ///
    /// Panics if `at` reaches into flushed history.
    pub fn truncate(&mut self, at: Nanos) {
        if at >= self.cursor {
            return;
        }
        while let Some(last) = self.pending.last_mut() {
            if last.start >= at {
                self.pending.pop();
            } else {
                last.end = last.end.min(at);
                break;
            }
        }
        assert!(
            self.pending.last().map_or(at, |s| s.end) == at
                || self.pending.is_empty() && self.flushed_end() == at,
            "truncation reaches flushed history"
        );
        self.cursor = at;
    }

    fn flushed_end(&self) -> Nanos {
        self.segments.last().map_or(0, |s| s.end)
    }

    /// Time in WiFi states within `[from, to)` among pending segments.
    pub fn wifi_time_between(&self, from: Nanos, to: Nanos) -> Nanos {
        self.pending
            .iter()
            .rev()
            .take_while(|s| s.end > from)
            .filter(|s| s.state.is_wifi())
            .map(|s| s.end.min(to).saturating_sub(s.start.max(from)))
            .sum()
    }

    /// STAs with a successful frame starting in `[from, to)` among pending segments.
    pub fn senders_between(&self, from: Nanos, to: Nanos) -> BTreeSet<u32> {
        self.pending
            .iter()
            .rev()
            .take_while(|s| s.end > from)
            .filter(|s| s.state == ChannelState::WifiSuccess && s.start >= from && s.start < to)
            .filter_map(|s| s.node)
            .collect()
    }

    /// Makes every segment ending at or before `t` final.
    pub fn flush_before(&mut self, t: Nanos) {
        let n = self.pending.iter().take_while(|s| s.end <= t).count();
        for seg in self.pending.drain(..n) {
            self.airtime[seg.state.index()] += seg.end - seg.start;
            if self.record_segments {
                self.segments.push(seg);
            } else {
                self.segments.clear();
                self.segments.push(seg);
            }
        }
    }

    pub fn finish(mut self) -> (Vec<Segment>, [Nanos; 6], Nanos) {
        self.flush_before(Nanos::MAX);
        if !self.record_segments {
            self.segments.clear();
        }
        (self.segments, self.airtime, self.cursor)
    }
}

//! Licensed carrier at subframe granularity.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::balancer::Decision;

/// Per-epoch plan aligned to subframes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpochSchedule {
    pub decision: Decision,
    /// Subframes the SBS stays off the unlicensed channel.
    pub mute_unlicensed: u32,
    /// Subframes the SBS transmits on the licensed carrier (the rest are ABS).
    pub tx_licensed: u32,
    /// Time still owed to the SBS from earlier epochs, ns.
    pub carryover: u64,
}

/// Rounds real-valued subframe counts to integers, carrying the remainder
/// forward so long-run averages stay unbiased.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CarryRounder {
    remainder: f64,
}

impl CarryRounder {
    pub fn round(&mut self, target: f64, max: u32) -> u32 {
        let want = target + self.remainder;
        let n = want.round().clamp(0.0, f64::from(max));
        self.remainder = want - n;
        n as u32
    }
}

/// Per-UE licensed rates, bps, after the round-robin bandwidth split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LicensedLink {
    pub mue_noabs: Vec<f64>,
    pub mue_abs: Vec<f64>,
    /// SUE rate when every MBS resource block is in use.
    pub sue_interfered: Vec<f64>,
    /// SUE rate with the MBS silent.
    pub sue_clean: Vec<f64>,
}

/// MBS downlink demand.
#[derive(Debug, Clone)]
pub struct MueTraffic {
    backlog_bits: Vec<f64>,
    arrivals: Option<(Poisson<f64>, f64)>,
    full_buffer: bool,
}

impl MueTraffic {
    pub fn full_buffer(n_mue: usize) -> Self {
        Self {
            backlog_bits: vec![0.0; n_mue],
            arrivals: None,
            full_buffer: true,
        }
    }

    /// Poisson packets at `rate` per second per MUE, each `payload_bits` long,
    /// observed once per subframe of `subframe_s` seconds.
    pub fn poisson(n_mue: usize, rate: f64, payload_bits: f64, subframe_s: f64) -> Self {
        let mean = rate * subframe_s;
        Self {
            backlog_bits: vec![0.0; n_mue],
            arrivals: (mean > 0.0)
                .then(|| (Poisson::new(mean).expect("positive mean"), payload_bits)),
            full_buffer: false,
        }
    }

    pub fn is_full_buffer(&self) -> bool {
        self.full_buffer
    }

    pub fn backlog_bits(&self) -> &[f64] {
        &self.backlog_bits
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LicensedOutcome {
    pub mue_bits: Vec<f64>,
    pub sue_bits: Vec<f64>,
    /// Mean fraction of MBS capacity used, over every subframe.
    pub rb_usage: f64,
}

/// One epoch on the licensed carrier.
///
/// The SBS transmits in the first `tx_licensed` subframes; the rest are ABS.
/// Each MUE is served at its ABS or non-ABS rate, capped by its backlog
/// unless the MBS is full-buffer. SUEs see MBS interference in proportion to the
/// MBS's resource-block usage in that subframe.
pub fn licensed_band_throughput(
    schedule: &EpochSchedule,
    link: &LicensedLink,
    traffic: &mut MueTraffic,
    n_subframes: u32,
    subframe_s: f64,
    rng: &mut impl Rng,
) -> LicensedOutcome {
    let n_mue = link.mue_noabs.len();
    let n_sue = link.sue_clean.len();
    let mut mue_bits = vec![0.0; n_mue];
    let mut sue_bits = vec![0.0; n_sue];
    let mut usage_sum = 0.0;

    for sf in 0..n_subframes {
        let sbs_on = sf < schedule.tx_licensed;
        let (mut served, mut capacity) = (0.0, 0.0);
        for (m, bits) in mue_bits.iter_mut().enumerate() {
            let rate = if sbs_on {
                link.mue_noabs[m]
            } else {
                link.mue_abs[m]
            };
            let cap = rate * subframe_s;
            let delivered = if traffic.full_buffer {
                cap
            } else {
                if let Some((dist, payload)) = &traffic.arrivals {
                    traffic.backlog_bits[m] += dist.sample(rng) * payload;
                }
                let d = traffic.backlog_bits[m].min(cap);
                traffic.backlog_bits[m] -= d;
                d
            };
            *bits += delivered;
            served += delivered;
            capacity += cap;
        }
        let usage = if n_mue == 0 {
            0.0
        } else if capacity > 0.0 {
            served / capacity
        } else {
            1.0
        };
        usage_sum += usage;
        if sbs_on {
            for ((bits, i), c) in sue_bits
                .iter_mut()
                .zip(&link.sue_interfered)
                .zip(&link.sue_clean)
            {
                *bits += (usage * i + (1.0 - usage) * c) * subframe_s;
            }
        }
    }
    LicensedOutcome {
        mue_bits,
        sue_bits,
        rb_usage: if n_subframes == 0 {
            0.0
        } else {
            usage_sum / f64::from(n_subframes)
        },
    }
}

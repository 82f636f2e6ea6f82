#![allow(dead_code)]

use laa_balancer::balancer::BalancerInput;
use laa_balancer::rate_model::{RatePrimitives, WifiMacParams};
use laa_balancer::sim::{ChannelState, SimTrace};
use proptest::prelude::*;
use rand::Rng;

pub fn scenario_path(name: &str) -> String {
    format!("{}/scenarios/{name}.toml", env!("CARGO_MANIFEST_DIR"))
}

/// Log-uniform rate in `[1e5, 1e8]` bps.
pub fn rate() -> impl Strategy<Value = f64> {
    (5.0f64..8.0).prop_map(|e| 10f64.powf(e))
}

fn rates(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(rate(), n)
}

/// Random rates for 1..=10 nodes of each class.
pub fn primitives() -> impl Strategy<Value = RatePrimitives> {
    (1usize..=10, 1usize..=10, 1usize..=10).prop_flat_map(|(m, f, w)| {
        (rates(m), rates(m), rates(f), rates(f), rates(w)).prop_map(|(a, b, l, u, s)| {
            // Blank subframes never hurt an MUE.
            let (noabs, abs) = a
                .iter()
                .zip(&b)
                .map(|(&x, &y)| (x.min(y), x.max(y)))
                .unzip();
            RatePrimitives {
                s_m_noabs: noabs,
                s_m_abs: abs,
                s_f_l: l,
                s_f_u: u,
                s_w_hat: s,
            }
        })
    })
}

pub fn instance() -> impl Strategy<Value = BalancerInput> {
    (primitives(), 0.001f64..=1.0).prop_map(|(p, r)| BalancerInput::new(p, r))
}

/// Same distribution as [`instance`], drawn from a plain RNG.
pub fn random_instance(rng: &mut impl Rng) -> BalancerInput {
    let (m, f, w) = (
        rng.random_range(1..=10),
        rng.random_range(1..=10),
        rng.random_range(1..=10),
    );
    let r = 1.0 - rng.random_range(0.0..0.999);
    let mut draw = |n: usize| {
        (0..n)
            .map(|_| 10f64.powf(rng.random_range(5.0..8.0)))
            .collect::<Vec<_>>()
    };
    let (a, b) = (draw(m), draw(m));
    let (noabs, abs) = a
        .iter()
        .zip(&b)
        .map(|(&x, &y)| (x.min(y), x.max(y)))
        .unzip();
    let p = RatePrimitives {
        s_m_noabs: noabs,
        s_m_abs: abs,
        s_f_l: draw(f),
        s_f_u: draw(f),
        s_w_hat: draw(w),
    };
    BalancerInput::new(p, r)
}

/// Per-station throughput of station 0 by direct slot sampling: every
/// station attempts independently with probability `tau` in each slot.
pub fn monte_carlo_throughput(
    params: &WifiMacParams,
    tau: f64,
    slots: usize,
    rng: &mut impl Rng,
) -> f64 {
    let n = params.n_stations;
    let (mut time, mut delivered) = (0.0, 0.0);
    for _ in 0..slots {
        let mut attempts = 0;
        let mut zero = false;
        for s in 0..n {
            if rng.random::<f64>() < tau {
                attempts += 1;
                zero |= s == 0;
            }
        }
        if attempts == 0 {
            time += params.idle_slot;
        } else {
            time += params.busy_slot;
            if attempts == 1 && zero {
                delivered += params.payload_bits;
            }
        }
    }
    delivered / time
}

/// Overlap of `[a, b)` and `[c, d)`.
pub fn overlap(a: u64, b: u64, c: u64, d: u64) -> u64 {
    b.min(d).saturating_sub(a.max(c))
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Checks the channel-access rules on a trace recorded with segments:
/// the segments partition the run and every epoch, LAA never overlaps a WiFi
/// exchange, and no LAA burst exceeds `max_occupancy`.
pub fn check_mechanism(trace: &SimTrace, epoch_ns: u64, max_occupancy: u64) -> Result<(), String> {
    let segs = &trace.segments;
    ensure!(
        segs.first().map(|s| s.start) == Some(0),
        "trace does not start at 0"
    );
    ensure!(
        segs.last().map(|s| s.end) == Some(trace.end),
        "trace does not reach its end"
    );
    for w in segs.windows(2) {
        ensure!(w[0].end == w[1].start, "gap or overlap at {}", w[0].end);
    }
    ensure!(
        segs.iter().all(|s| s.start < s.end && s.bits >= 0.0),
        "empty or negative segment"
    );
    ensure!(
        trace.airtime.iter().sum::<u64>() == trace.end,
        "airtime does not add up"
    );
    for e in &trace.epochs {
        let covered: u64 = segs
            .iter()
            .map(|s| overlap(s.start, s.end, e.start, e.start + epoch_ns))
            .sum();
        ensure!(
            covered == epoch_ns,
            "epoch at {} covers {covered} ns",
            e.start
        );
    }
    // Frames and LAA segments are both sorted by time.
    let mut first = 0;
    for s in segs
        .iter()
        .filter(|s| matches!(s.state, ChannelState::LaaTx | ChannelState::Cts))
    {
        while first < trace.frames.len() && trace.frames[first].rf_end <= s.start {
            first += 1;
        }
        for f in trace.frames[first..].iter().take_while(|f| f.start < s.end) {
            ensure!(
                overlap(s.start, s.end, f.start, f.rf_end) == 0,
                "{s:?} overlaps {f:?}"
            );
        }
    }
    for &(a, b) in &trace.laa_bursts {
        ensure!(b - a <= max_occupancy, "burst {a}..{b} too long");
    }
    for w in trace.laa_bursts.windows(2) {
        ensure!(
            w[1].0 > w[0].1,
            "bursts {:?} and {:?} not separated",
            w[0],
            w[1]
        );
    }
    Ok(())
}

//! WLAN load and population estimates from what the SBS hears while muted.

use std::collections::BTreeSet;

use super::trace::{EpochRecord, SimTrace};
use crate::balancer::EPS;
use crate::error::{Error, Result};

/// Busy share of the muted windows of the last `window` epochs, clamped to
/// `[EPS, 1]`. The flag is set when nothing was heard and the floor applied.
pub fn estimate_wlan_load(trace: &SimTrace, window: usize) -> Result<(f64, bool)> {
    load_from_epochs(&trace.epochs, window)
}

pub(crate) fn load_from_epochs(epochs: &[EpochRecord], window: usize) -> Result<(f64, bool)> {
    if window == 0 {
        return Err(Error::invalid("window", "at least one epoch"));
    }
    let recent = &epochs[epochs.len().saturating_sub(window)..];
    let observed: u64 = recent.iter().map(|e| e.muted_observed).sum();
    let busy: u64 = recent.iter().map(|e| e.muted_busy).sum();
    if observed == 0 {
        return Err(Error::InsufficientData("no muted time observed".into()));
    }
    let load = busy as f64 / observed as f64;
    Ok(if load < EPS {
        (EPS, true)
    } else {
        (load.min(1.0), false)
    })
}

/// Distinct STAs heard completing a frame during the muted windows of the
/// last `window` epochs.
pub fn count_active_stas(trace: &SimTrace, window: usize) -> usize {
    stas_from_epochs(&trace.epochs, window).len()
}

pub(crate) fn stas_from_epochs(epochs: &[EpochRecord], window: usize) -> BTreeSet<u32> {
    epochs[epochs.len().saturating_sub(window)..]
        .iter()
        .flat_map(|e| e.senders.iter().copied())
        .collect()
}

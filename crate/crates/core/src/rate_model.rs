//! Link rates for the three node classes.
//!
//! Everything here is a pure function of its inputs: SINR per link and
//! regime, Shannon rates with an optional MAC-layer spectral-efficiency cap,
//! slotted 802.11 DCF throughput, and the epoch-composite throughputs that the
//! optimizer and the metrics consume.
//!
//! Powers are in watts throughout; [`dbm_to_watts`] is the conversion used at
//! the scenario boundary.

use serde::{Deserialize, Serialize};

use crate::balancer::Decision;
use crate::error::{Error, Result};

/// LTE MAC-layer cap: 75 Mbps over a 20 MHz carrier.
pub const LTE_MAC_CAP_BPS_PER_HZ: f64 = 75e6 / 20e6;
/// WiFi MAC-layer cap: 65 Mbps over a 20 MHz channel.
pub const WIFI_MAC_CAP_BPS_PER_HZ: f64 = 65e6 / 20e6;

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

/// Received, interference and noise powers for every UE of the MBS and the SBS.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadioEnvironment {
    /// Received power at each SUE from the SBS.
    pub p_sbs_sue: Vec<f64>,
    /// Received power at each MUE from the MBS.
    pub p_mbs_mue: Vec<f64>,
    /// MBS interference at each SUE while both cells transmit on the licensed band.
    pub i_mbs_sue: Vec<f64>,
    /// SBS interference at each MUE during non-ABS subframes.
    pub i_sbs_mue: Vec<f64>,
    /// Residual hidden-terminal WLAN interference at each SUE on the unlicensed channel.
    pub i_wlan_sue: Vec<f64>,
    /// Thermal noise power.
    pub noise: f64,
    /// Licensed carrier bandwidth in Hz, split round-robin across a cell's UEs.
    pub licensed_bw: f64,
    /// Unlicensed channel bandwidth in Hz, split round-robin across the SUEs.
    pub unlicensed_bw: f64,
}

/// Interference regime a link is evaluated in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    SueLicensed,
    SueUnlicensed,
    MueNoAbs,
    MueAbs,
}

impl RadioEnvironment {
    pub fn n_mue(&self) -> usize {
        self.p_mbs_mue.len()
    }

    pub fn n_sue(&self) -> usize {
        self.p_sbs_sue.len()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.noise > 0.0) {
            return Err(Error::invalid("noise", "must be strictly positive"));
        }
        if self.i_mbs_sue.len() != self.n_sue() || self.i_wlan_sue.len() != self.n_sue() {
            return Err(Error::invalid(
                "i_mbs_sue/i_wlan_sue",
                "one entry per SUE required",
            ));
        }
        if self.i_sbs_mue.len() != self.n_mue() {
            return Err(Error::invalid("i_sbs_mue", "one entry per MUE required"));
        }
        let powers = self
            .p_sbs_sue
            .iter()
            .chain(&self.p_mbs_mue)
            .chain(&self.i_mbs_sue)
            .chain(&self.i_sbs_mue)
            .chain(&self.i_wlan_sue);
        for &p in powers {
            if !(p >= 0.0) || !p.is_finite() {
                return Err(Error::invalid(
                    "power",
                    format!("{p} is not a nonnegative power"),
                ));
            }
        }
        if !(self.licensed_bw > 0.0) || !(self.unlicensed_bw > 0.0) {
            return Err(Error::invalid("bandwidth", "must be positive"));
        }
        Ok(())
    }

    /// Round-robin share of the licensed carrier for one MUE.
    pub fn mue_bandwidth(&self) -> f64 {
        self.licensed_bw / self.n_mue().max(1) as f64
    }

    /// Round-robin share of a carrier for one SUE (same split on both bands).
    pub fn sue_bandwidth(&self, regime: Regime) -> f64 {
        let bw = match regime {
            Regime::SueUnlicensed => self.unlicensed_bw,
            _ => self.licensed_bw,
        };
        bw / self.n_sue().max(1) as f64
    }
}

/// Downlink SINR of `node` (index within its class) under `regime`.
pub fn sinr(env: &RadioEnvironment, node: usize, regime: Regime) -> Result<f64> {
    if !(env.noise > 0.0) {
        return Err(Error::invalid("noise", "must be strictly positive"));
    }
    let lookup = |v: &[f64], class: &'static str| {
        v.get(node).copied().ok_or(Error::UnknownNode {
            class,
            id: node,
            count: v.len(),
        })
    };
    let (signal, interference) = match regime {
        Regime::SueLicensed => (
            lookup(&env.p_sbs_sue, "SUE")?,
            lookup(&env.i_mbs_sue, "SUE")?,
        ),
        Regime::SueUnlicensed => (
            lookup(&env.p_sbs_sue, "SUE")?,
            lookup(&env.i_wlan_sue, "SUE")?,
        ),
        Regime::MueNoAbs => (
            lookup(&env.p_mbs_mue, "MUE")?,
            lookup(&env.i_sbs_mue, "MUE")?,
        ),
        Regime::MueAbs => (lookup(&env.p_mbs_mue, "MUE")?, 0.0),
    };
    Ok(signal / (env.noise + interference))
}

/// `bw * log2(1 + gamma)` in bps.
pub fn shannon_rate(bw: f64, gamma: f64) -> Result<f64> {
    if !(bw >= 0.0) {
        return Err(Error::invalid("bw", format!("{bw} is negative")));
    }
    if !(gamma >= 0.0) {
        return Err(Error::invalid("gamma", format!("{gamma} is negative")));
    }
    Ok(bw * gamma.ln_1p() / std::f64::consts::LN_2)
}

/// Shannon rate clamped to `cap` bps/Hz when a cap is given.
pub fn capped_rate(bw: f64, gamma: f64, cap: Option<f64>) -> Result<f64> {
    let raw = shannon_rate(bw, gamma)?;
    Ok(match cap {
        Some(c) => raw.min(c * bw),
        None => raw,
    })
}

/// Log-distance path loss model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathLossParams {
    /// Loss at the reference distance, dB.
    pub pl0_db: f64,
    /// Reference distance, m.
    pub d0: f64,
    pub exponent_outdoor: f64,
    pub exponent_indoor: f64,
    /// Extra loss applied to indoor links, dB.
    pub wall_loss_db: f64,
}

impl Default for PathLossParams {
    fn default() -> Self {
        Self {
            pl0_db: 40.0,
            d0: 1.0,
            exponent_outdoor: 3.5,
            exponent_indoor: 3.0,
            wall_loss_db: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    Outdoor,
    Indoor,
}

/// `PL0 + 10 n log10(d / d0)` dB, plus the wall loss for indoor links.
pub fn path_loss(distance: f64, placement: Placement, params: &PathLossParams) -> Result<f64> {
    if !(distance > 0.0) {
        return Err(Error::invalid(
            "distance",
            format!("{distance} m is not positive"),
        ));
    }
    let (exponent, extra) = match placement {
        Placement::Outdoor => (params.exponent_outdoor, 0.0),
        Placement::Indoor => (params.exponent_indoor, params.wall_loss_db),
    };
    Ok(params.pl0_db + 10.0 * exponent * (distance / params.d0).log10() + extra)
}

/// PHY constants used to derive 802.11 busy-slot durations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WifiPhy {
    /// Data rate, bps.
    pub phy_rate: f64,
    /// Control-frame (ACK/CTS) rate, bps.
    pub basic_rate: f64,
    /// PLCP preamble + header, s.
    pub phy_header: f64,
    pub mac_header_bits: f64,
    pub ack_bits: f64,
}

impl Default for WifiPhy {
    /// 64-QAM 5/6 on a 20 MHz channel.
    fn default() -> Self {
        Self {
            phy_rate: 65e6,
            basic_rate: 24e6,
            phy_header: 20e-6,
            mac_header_bits: 288.0,
            ack_bits: 112.0,
        }
    }
}

/// Slotted 802.11 DCF parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WifiMacParams {
    /// Per-station attempt probability; derived from the contention window when `None`.
    pub tau: Option<f64>,
    pub payload_bits: f64,
    /// Idle slot duration, s.
    pub idle_slot: f64,
    /// Busy slot duration (success or collision), s.
    pub busy_slot: f64,
    pub sifs: f64,
    pub difs: f64,
    /// Minimum contention window W (backoff drawn from `0..W`).
    pub cw_min: u32,
    /// Number of window doublings before the window saturates.
    pub retry_stages: u32,
    pub n_stations: usize,
}

impl WifiMacParams {
    /// 802.11 OFDM timing (9 us slot, 16 us SIFS, 34 us DIFS), CWmin 16, six
    /// backoff stages, 1500-byte payloads on the default PHY.
    pub fn standard(n_stations: usize) -> Self {
        let phy = WifiPhy::default();
        let payload_bits = 1500.0 * 8.0;
        let sifs = 16e-6;
        let difs = 34e-6;
        Self {
            tau: None,
            payload_bits,
            idle_slot: 9e-6,
            busy_slot: busy_slot_duration(&phy, payload_bits, sifs, difs),
            sifs,
            difs,
            cw_min: 16,
            retry_stages: 6,
            n_stations,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(t) = self.tau {
            if !(t > 0.0 && t < 1.0) {
                return Err(Error::invalid("tau", format!("{t} not in (0, 1)")));
            }
        }
        if !(self.sifs > 0.0 && self.sifs < self.difs) {
            return Err(Error::invalid("sifs/difs", "need 0 < SIFS < DIFS"));
        }
        if !(self.idle_slot > 0.0 && self.idle_slot < self.busy_slot) {
            return Err(Error::invalid(
                "idle_slot/busy_slot",
                "need 0 < idle < busy",
            ));
        }
        if !(self.payload_bits > 0.0) {
            return Err(Error::invalid("payload_bits", "must be positive"));
        }
        if self.cw_min < 1 {
            return Err(Error::invalid("cw_min", "must be at least 1"));
        }
        Ok(())
    }

    /// Configured attempt probability, or the saturated fixed point for this population.
    pub fn attempt_probability(&self) -> Result<f64> {
        match self.tau {
            Some(t) => Ok(t),
            None => bianchi_tau(self.cw_min, self.retry_stages, self.n_stations.max(1)),
        }
    }

    /// Largest contention window, `cw_min * 2^retry_stages`.
    pub fn cw_max(&self) -> u32 {
        self.cw_min << self.retry_stages
    }
}

/// Data airtime + SIFS + ACK + DIFS.
pub fn busy_slot_duration(phy: &WifiPhy, payload_bits: f64, sifs: f64, difs: f64) -> f64 {
    let data = phy.phy_header + (payload_bits + phy.mac_header_bits) / phy.phy_rate;
    let ack = phy.phy_header + phy.ack_bits / phy.basic_rate;
    data + sifs + ack + difs
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlotProbabilities {
    pub p_succ: Vec<f64>,
    pub p_idle: f64,
    pub p_busy: f64,
}

/// Per-station success, idle and busy probabilities for per-station attempt
/// probabilities `taus`.
pub fn slot_probabilities(taus: &[f64]) -> Result<SlotProbabilities> {
    if taus.is_empty() {
        return Err(Error::invalid(
            "n_stations",
            "at least one station required",
        ));
    }
    if let Some(t) = taus.iter().find(|t| !(**t > 0.0 && **t < 1.0)) {
        return Err(Error::invalid("tau", format!("{t} not in (0, 1)")));
    }
    let p_idle: f64 = taus.iter().map(|t| 1.0 - t).product();
    let p_succ = (0..taus.len())
        .map(|w| {
            taus[w]
                * taus
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != w)
                    .map(|(_, t)| 1.0 - t)
                    .product::<f64>()
        })
        .collect();
    Ok(SlotProbabilities {
        p_succ,
        p_idle,
        p_busy: 1.0 - p_idle,
    })
}

/// Slot probabilities for a homogeneous population described by `params`.
pub fn wifi_slot_probabilities(params: &WifiMacParams) -> Result<SlotProbabilities> {
    if params.n_stations == 0 {
        return Err(Error::invalid(
            "n_stations",
            "at least one station required",
        ));
    }
    let tau = params.attempt_probability()?;
    slot_probabilities(&vec![tau; params.n_stations])
}

const BIANCHI_TOL: f64 = 1e-10;
const BIANCHI_MAX_ITER: usize = 100_000;

/// Saturated-DCF attempt probability: the fixed point of
/// `tau = 2 / (W + 1 + p W sum_{i<m} (2p)^i)` with `p = 1 - (1 - tau)^(n-1)`.
///
/// The geometric-sum form is the same expression as the usual
/// `2(1-2p) / ((1-2p)(W+1) + pW(1-(2p)^m))` without the removable singularity
/// at `p = 1/2`.
pub fn bianchi_tau(cw_min: u32, retry_stages: u32, n_stations: usize) -> Result<f64> {
    if cw_min < 1 {
        return Err(Error::invalid("cw_min", "must be at least 1"));
    }
    if n_stations < 1 {
        return Err(Error::invalid("n_stations", "must be at least 1"));
    }
    let w = cw_min as f64;
    let attempt = |p: f64| {
        let stages: f64 = (0..retry_stages).map(|i| (2.0 * p).powi(i as i32)).sum();
        2.0 / (w + 1.0 + p * w * stages)
    };
    let collision = |tau: f64| 1.0 - (1.0 - tau).powi(n_stations as i32 - 1);

    let mut tau = 2.0 / (w + 1.0);
    let damping = 0.5;
    for _ in 0..BIANCHI_MAX_ITER {
        let next = (1.0 - damping) * tau + damping * attempt(collision(tau));
        if (next - tau).abs() < BIANCHI_TOL * 1e-2 {
            return Ok(next.min(1.0 - f64::EPSILON));
        }
        tau = next;
    }
    Err(Error::NoConvergence {
        iterations: BIANCHI_MAX_ITER,
    })
}

/// Throughput of `station` when the WLAN has the channel to itself.
pub fn wifi_exclusive_throughput(params: &WifiMacParams, station: usize) -> Result<f64> {
    let probs = wifi_slot_probabilities(params)?;
    let p_succ = *probs.p_succ.get(station).ok_or(Error::UnknownNode {
        class: "STA",
        id: station,
        count: params.n_stations,
    })?;
    let mean_slot = probs.p_idle * params.idle_slot + probs.p_busy * params.busy_slot;
    if !(mean_slot > 0.0) {
        return Err(Error::invalid(
            "slot durations",
            "mean slot duration is zero",
        ));
    }
    Ok(p_succ * params.payload_bits / mean_slot)
}

/// The five per-node rate constants the optimizer consumes, bps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatePrimitives {
    /// Per-MUE rate while the SBS transmits on the licensed band.
    pub s_m_noabs: Vec<f64>,
    /// Per-MUE rate during ABS subframes.
    pub s_m_abs: Vec<f64>,
    /// Per-SUE licensed rate.
    pub s_f_l: Vec<f64>,
    /// Per-SUE unlicensed rate.
    pub s_f_u: Vec<f64>,
    /// Per-STA rate with exclusive use of the unlicensed channel.
    pub s_w_hat: Vec<f64>,
}

impl RatePrimitives {
    pub fn n_mue(&self) -> usize {
        self.s_m_noabs.len()
    }

    pub fn n_sue(&self) -> usize {
        self.s_f_l.len()
    }

    pub fn n_sta(&self) -> usize {
        self.s_w_hat.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.s_m_abs.len() != self.s_m_noabs.len() {
            return Err(Error::invalid("s_m_abs", "length differs from s_m_noabs"));
        }
        if self.s_f_u.len() != self.s_f_l.len() {
            return Err(Error::invalid("s_f_u", "length differs from s_f_l"));
        }
        let all = self
            .s_m_noabs
            .iter()
            .chain(&self.s_m_abs)
            .chain(&self.s_f_l)
            .chain(&self.s_f_u)
            .chain(&self.s_w_hat);
        for &r in all {
            if !(r >= 0.0) || !r.is_finite() {
                return Err(Error::invalid(
                    "rate",
                    format!("{r} is not a nonnegative rate"),
                ));
            }
        }
        for (m, (&noabs, &abs)) in self.s_m_noabs.iter().zip(&self.s_m_abs).enumerate() {
            if abs < noabs {
                return Err(Error::invalid(
                    "s_m_abs",
                    format!("MUE {m}: ABS rate {abs} below non-ABS rate {noabs}"),
                ));
            }
        }
        Ok(())
    }

    /// Multiplies every rate by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let s = |v: &[f64]| v.iter().map(|x| x * factor).collect();
        Self {
            s_m_noabs: s(&self.s_m_noabs),
            s_m_abs: s(&self.s_m_abs),
            s_f_l: s(&self.s_f_l),
            s_f_u: s(&self.s_f_u),
            s_w_hat: s(&self.s_w_hat),
        }
    }

    /// Rates derived from link SINRs, with round-robin bandwidth split, the
    /// optional LTE spectral-efficiency cap, and the WLAN's exclusive-channel
    /// rate for `wifi.n_stations` stations.
    pub fn from_environment(
        env: &RadioEnvironment,
        wifi: &WifiMacParams,
        lte_cap: Option<f64>,
    ) -> Result<Self> {
        env.validate()?;
        let mue = |regime| -> Result<Vec<f64>> {
            (0..env.n_mue())
                .map(|m| capped_rate(env.mue_bandwidth(), sinr(env, m, regime)?, lte_cap))
                .collect()
        };
        let sue = |regime| -> Result<Vec<f64>> {
            (0..env.n_sue())
                .map(|f| capped_rate(env.sue_bandwidth(regime), sinr(env, f, regime)?, lte_cap))
                .collect()
        };
        let s_w_hat = (0..wifi.n_stations)
            .map(|w| wifi_exclusive_throughput(wifi, w))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            s_m_noabs: mue(Regime::MueNoAbs)?,
            s_m_abs: mue(Regime::MueAbs)?,
            s_f_l: sue(Regime::SueLicensed)?,
            s_f_u: sue(Regime::SueUnlicensed)?,
            s_w_hat,
        })
    }
}

/// Per-node throughput over an epoch for a given decision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochThroughputs {
    pub mue: Vec<f64>,
    pub sue: Vec<f64>,
    pub sta: Vec<f64>,
}

impl EpochThroughputs {
    /// All nodes, MUEs first, then SUEs, then STAs.
    pub fn all(&self) -> Vec<f64> {
        self.mue
            .iter()
            .chain(&self.sue)
            .chain(&self.sta)
            .copied()
            .collect()
    }
}

pub fn epoch_throughputs(rates: &RatePrimitives, d: Decision) -> Result<EpochThroughputs> {
    if !(0.0..=1.0).contains(&d.alpha) || !(0.0..=1.0).contains(&d.beta) {
        return Err(Error::DecisionOutOfRange {
            alpha: d.alpha,
            beta: d.beta,
        });
    }
    let (alpha, beta) = (d.alpha, d.beta);
    Ok(EpochThroughputs {
        mue: rates
            .s_m_noabs
            .iter()
            .zip(&rates.s_m_abs)
            .map(|(noabs, abs)| beta * noabs + (1.0 - beta) * abs)
            .collect(),
        sue: rates
            .s_f_l
            .iter()
            .zip(&rates.s_f_u)
            .map(|(l, u)| beta * l + (1.0 - alpha) * u)
            .collect(),
        sta: rates.s_w_hat.iter().map(|s| alpha * s).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    fn single_link_env(p: f64, noise: f64, i: f64) -> RadioEnvironment {
        RadioEnvironment {
            p_sbs_sue: vec![p],
            p_mbs_mue: vec![p],
            i_mbs_sue: vec![i],
            i_sbs_mue: vec![i],
            i_wlan_sue: vec![i],
            noise,
            licensed_bw: 20e6,
            unlicensed_bw: 20e6,
        }
    }

    #[test]
    fn sinr_examples() {
        let env = single_link_env(1e-9, 1e-12, 1e-9);
        assert!(close(sinr(&env, 0, Regime::MueAbs).unwrap(), 1000.0, 1e-12));
        let noabs = sinr(&env, 0, Regime::MueNoAbs).unwrap();
        assert!(close(noabs, 1e-9 / (1e-12 + 1e-9), 1e-12));
        assert!((noabs - 0.999).abs() < 1e-3);

        let env = single_link_env(1e-10, 1e-13, 9e-11);
        let g = sinr(&env, 0, Regime::SueUnlicensed).unwrap();
        assert!((g - 1.1099).abs() < 1e-4, "{g}");
    }

    #[test]
    fn sinr_errors() {
        let env = single_link_env(1e-9, 1e-12, 0.0);
        assert!(matches!(
            sinr(&env, 3, Regime::SueLicensed),
            Err(Error::UnknownNode { id: 3, .. })
        ));
        let mut bad = env.clone();
        bad.noise = 0.0;
        assert!(sinr(&bad, 0, Regime::MueAbs).is_err());
    }

    #[test]
    fn shannon_examples() {
        assert!(close(shannon_rate(1.0, 1.0).unwrap(), 1.0, 1e-15));
        assert_eq!(shannon_rate(20e6, 0.0).unwrap(), 0.0);
        assert!(close(shannon_rate(20e6, 3.0).unwrap(), 40e6, 1e-15));
        assert!(shannon_rate(-1.0, 1.0).is_err());
        assert!(shannon_rate(1.0, -0.5).is_err());
    }

    #[test]
    fn cap_clamps_to_mac_rate() {
        let r = capped_rate(20e6, 1e6, Some(LTE_MAC_CAP_BPS_PER_HZ)).unwrap();
        assert!(close(r, 75e6, 1e-12));
        let r = capped_rate(20e6, 3.0, Some(LTE_MAC_CAP_BPS_PER_HZ)).unwrap();
        assert!(close(r, 40e6, 1e-12));
    }

    #[test]
    fn slot_probability_examples() {
        let p = slot_probabilities(&[0.25]).unwrap();
        assert!(close(p.p_succ[0], 0.25, 1e-15));
        assert!(close(p.p_idle, 0.75, 1e-15));
        assert!(close(p.p_busy, 0.25, 1e-15));

        let p = slot_probabilities(&[0.5, 0.5]).unwrap();
        assert!(p.p_succ.iter().all(|&s| close(s, 0.25, 1e-15)));
        assert!(close(p.p_idle, 0.25, 1e-15));
        assert!(close(p.p_busy, 0.75, 1e-15));

        let p = slot_probabilities(&[0.1; 5]).unwrap();
        assert!(p.p_succ.iter().all(|&s| (s - 0.06561).abs() < 1e-12));
        assert!((p.p_idle - 0.59049).abs() < 1e-12);
        assert!((p.p_busy - 0.40951).abs() < 1e-12);

        assert!(slot_probabilities(&[1.0]).is_err());
        assert!(slot_probabilities(&[0.0, 0.2]).is_err());
        assert!(slot_probabilities(&[]).is_err());
    }

    #[test]
    fn bianchi_single_station_closed_form() {
        assert!(close(bianchi_tau(2, 0, 1).unwrap(), 2.0 / 3.0, 1e-12));
        assert!(close(bianchi_tau(16, 0, 1).unwrap(), 2.0 / 17.0, 1e-12));
        // One station never collides, so extra stages change nothing.
        assert!(close(bianchi_tau(16, 6, 1).unwrap(), 2.0 / 17.0, 1e-12));
        assert!(bianchi_tau(0, 3, 2).is_err());
        assert!(bianchi_tau(16, 3, 0).is_err());
    }

    /// Independent route: bisection on `tau - tau(p(tau))` using the textbook
    /// closed form with the `(1 - 2p)` factors.
    fn bianchi_by_bisection(w: f64, m: i32, n: i32) -> f64 {
        let residual = |tau: f64| {
            let p: f64 = 1.0 - (1.0 - tau).powi(n - 1);
            let num = 2.0 * (1.0 - 2.0 * p);
            let den = (1.0 - 2.0 * p) * (w + 1.0) + p * w * (1.0 - (2.0 * p).powi(m));
            tau - num / den
        };
        let (mut lo, mut hi) = (1e-9, 2.0 / (w + 1.0));
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if residual(mid) < 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn bianchi_matches_bisection_oracle() {
        let oracle = bianchi_by_bisection(16.0, 6, 10);
        let tau = bianchi_tau(16, 6, 10).unwrap();
        assert!((tau - oracle).abs() < 1e-9, "{tau} vs {oracle}");
        for n in [2, 3, 5, 20] {
            let oracle = bianchi_by_bisection(32.0, 5, n);
            let tau = bianchi_tau(32, 5, n as usize).unwrap();
            assert!((tau - oracle).abs() < 1e-9, "n={n}: {tau} vs {oracle}");
        }
    }

    #[test]
    fn exclusive_throughput_examples() {
        let mut p = WifiMacParams::standard(1);
        p.payload_bits = 12000.0;
        p.idle_slot = 9e-6;
        p.busy_slot = 1e-3;

        p.tau = Some(0.5);
        let s = wifi_exclusive_throughput(&p, 0).unwrap();
        let expected = 0.5 * 12000.0 / (0.5 * 9e-6 + 0.5 * 1e-3);
        assert!(close(s, expected, 1e-12));
        assert!((s / 1e6 - 11.89).abs() < 0.01);

        p.tau = Some(1.0 - 1e-12);
        let s = wifi_exclusive_throughput(&p, 0).unwrap();
        assert!(close(s, 12000.0 / 1e-3, 1e-6));

        assert!(wifi_exclusive_throughput(&p, 1).is_err());
    }

    #[test]
    fn standard_busy_slot() {
        let p = WifiMacParams::standard(1);
        // 20 + 189.05 + 16 + 24.67 + 34 us
        assert!(
            (p.busy_slot * 1e6 - 283.713).abs() < 1e-2,
            "{}",
            p.busy_slot
        );
        p.validate().unwrap();
    }

    #[test]
    fn epoch_throughput_examples() {
        let rates = RatePrimitives {
            s_m_noabs: vec![10.0],
            s_m_abs: vec![20.0],
            s_f_l: vec![30.0],
            s_f_u: vec![40.0],
            s_w_hat: vec![50.0],
        };
        let t = epoch_throughputs(&rates, Decision::unchecked(1.0, 1.0)).unwrap();
        assert_eq!((t.mue[0], t.sue[0], t.sta[0]), (10.0, 30.0, 50.0));
        let t = epoch_throughputs(&rates, Decision::unchecked(1.0, 0.0)).unwrap();
        assert_eq!((t.mue[0], t.sue[0], t.sta[0]), (20.0, 0.0, 50.0));
        let t = epoch_throughputs(&rates, Decision::unchecked(0.5, 0.75)).unwrap();
        assert!(close(t.mue[0], 12.5, 1e-15));
        assert!(close(t.sue[0], 42.5, 1e-15));
        assert!(close(t.sta[0], 25.0, 1e-15));
        assert!(epoch_throughputs(&rates, Decision::unchecked(1.2, 0.5)).is_err());
        assert!(epoch_throughputs(&rates, Decision::unchecked(0.5, -0.1)).is_err());
    }

    #[test]
    fn path_loss_examples() {
        let p = PathLossParams {
            pl0_db: 40.0,
            d0: 1.0,
            exponent_outdoor: 3.5,
            exponent_indoor: 3.0,
            wall_loss_db: 0.0,
        };
        assert!(close(
            path_loss(1.0, Placement::Outdoor, &p).unwrap(),
            40.0,
            1e-15
        ));
        assert!(close(
            path_loss(10.0, Placement::Indoor, &p).unwrap(),
            70.0,
            1e-12
        ));
        let pl = path_loss(200.0, Placement::Outdoor, &p).unwrap();
        assert!((pl - 120.5).abs() < 0.05, "{pl}");
        assert!(path_loss(0.0, Placement::Outdoor, &p).is_err());
        let walled = PathLossParams {
            wall_loss_db: 10.0,
            ..p
        };
        assert!(close(
            path_loss(10.0, Placement::Indoor, &walled).unwrap(),
            80.0,
            1e-12
        ));
    }

    #[test]
    fn dbm_round_trip() {
        assert!(close(dbm_to_watts(30.0), 1.0, 1e-15));
        assert!(close(dbm_to_watts(-60.0), 1e-9, 1e-12));
        assert!(close(watts_to_dbm(dbm_to_watts(-87.5)), -87.5, 1e-12));
    }
}

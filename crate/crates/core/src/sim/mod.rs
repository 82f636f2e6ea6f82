//! WiFi/LAA coexistence simulator.
//!
//! The unlicensed channel is simulated on WLAN virtual slots, the licensed
//! carrier on 1 ms subframes; both advance one epoch at a time. At every
//! epoch start the policy picks `(alpha, beta)` from what the SBS measured in
//! previous epochs: busy share and distinct senders heard while muted, and
//! MBS resource-block usage on the licensed carrier.

mod dcf;
mod estimate;
mod licensed;
mod trace;
mod unlicensed;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use dcf::{wifi_dcf_step, DcfState, SlotOutcome, Station, Traffic};
pub use estimate::{count_active_stas, estimate_wlan_load};
pub use licensed::{
    licensed_band_throughput, CarryRounder, EpochSchedule, LicensedLink, LicensedOutcome,
    MueTraffic,
};
pub use trace::{secs_to_ns, ChannelState, EpochRecord, Nanos, Segment, SimTrace, WifiFrame};

use crate::balancer::{solve_holistic, BalancerInput, Decision};
use crate::baselines::{solve_case, BaselineCase};
use crate::error::{Error, Result};
use crate::metrics::MetricsReport;
use crate::rate_model::{
    wifi_exclusive_throughput, EpochThroughputs, RadioEnvironment, RatePrimitives, WifiMacParams,
    WifiPhy,
};
use unlicensed::{Timing, UnlicensedChannel};

/// How `(alpha, beta)` is chosen each epoch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    Holistic,
    Baseline(BaselineCase),
    Fixed(Decision),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Decision period, s.
    pub epoch: f64,
    /// Length of one run, s.
    pub run_length: f64,
    pub n_runs: usize,
    /// Per-STA frame arrival rate, frames/s; `None` for saturated stations.
    pub lambda_wlan: Option<f64>,
    /// Per-MUE packet arrival rate, packets/s; `None` for a full-buffer MBS.
    pub lambda_mue: Option<f64>,
    /// LAA sensing time, s; must sit strictly between SIFS and DIFS.
    pub delta: f64,
    pub subframe: f64,
    pub max_occupancy: f64,
    /// CTS frame plus turnaround, s.
    pub cts: f64,
    pub seed: u64,
    pub wifi: WifiMacParams,
    pub env: RadioEnvironment,
    /// Spectral-efficiency cap applied to LTE rates, bps/Hz.
    pub lte_cap: Option<f64>,
    /// Epochs of history behind each load and population estimate.
    pub estimation_window: usize,
    /// WLAN load assumed before anything has been measured.
    pub initial_load: f64,
    /// Keep the full segment list in each trace.
    pub record_segments: bool,
}

impl SimConfig {
    /// 20 ms epochs, 200 ms runs, 1000 runs, saturated WLAN, full-buffer MBS.
    pub fn new(env: RadioEnvironment, wifi: WifiMacParams) -> Self {
        let phy = WifiPhy::default();
        Self {
            epoch: 0.02,
            run_length: 0.2,
            n_runs: 1000,
            lambda_wlan: None,
            lambda_mue: None,
            delta: 0.5 * (wifi.sifs + wifi.difs),
            subframe: 1e-3,
            max_occupancy: 10e-3,
            cts: phy.phy_header + phy.ack_bits / phy.basic_rate + wifi.sifs,
            seed: 0,
            wifi,
            env,
            lte_cap: None,
            estimation_window: 3,
            initial_load: 1.0,
            record_segments: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.wifi.validate()?;
        self.env.validate()?;
        if !(self.delta > self.wifi.sifs && self.delta < self.wifi.difs) {
            return Err(Error::invalid("delta", "need SIFS < delta < DIFS"));
        }
        if !(self.subframe > 0.0) {
            return Err(Error::invalid("subframe", "must be positive"));
        }
        let per_epoch = self.epoch / self.subframe;
        if !(per_epoch >= 1.0) || (per_epoch - per_epoch.round()).abs() > 1e-9 {
            return Err(Error::invalid(
                "epoch",
                "must be a whole number of subframes",
            ));
        }
        let epochs = self.run_length / self.epoch;
        if !(epochs >= 1.0) || (epochs - epochs.round()).abs() > 1e-9 {
            return Err(Error::invalid(
                "run_length",
                "must be a whole number of epochs",
            ));
        }
        if !(self.max_occupancy > 0.0 && self.max_occupancy <= 10e-3 + 1e-12) {
            return Err(Error::invalid("max_occupancy", "must be in (0, 10 ms]"));
        }
        if !(self.cts > 0.0) {
            return Err(Error::invalid("cts", "must be positive"));
        }
        for (name, l) in [
            ("lambda_wlan", self.lambda_wlan),
            ("lambda_mue", self.lambda_mue),
        ] {
            if l.is_some_and(|l| !(l >= 0.0 && l.is_finite())) {
                return Err(Error::invalid(name, "must be a nonnegative rate"));
            }
        }
        if self.n_runs == 0 {
            return Err(Error::invalid("n_runs", "at least one run"));
        }
        if self.estimation_window == 0 {
            return Err(Error::invalid("estimation_window", "at least one epoch"));
        }
        if !(self.initial_load > 0.0 && self.initial_load <= 1.0) {
            return Err(Error::ZeroWifiLoad(self.initial_load));
        }
        Ok(())
    }

    pub fn subframes_per_epoch(&self) -> u32 {
        (self.epoch / self.subframe).round() as u32
    }

    pub fn n_epochs(&self) -> usize {
        (self.run_length / self.epoch).round() as usize
    }

    fn timing(&self) -> Timing {
        Timing {
            slot: secs_to_ns(self.wifi.idle_slot),
            busy: secs_to_ns(self.wifi.busy_slot),
            difs: secs_to_ns(self.wifi.difs),
            delta: secs_to_ns(self.delta),
            cts: secs_to_ns(self.cts),
            max_occupancy: secs_to_ns(self.max_occupancy),
            subframe: secs_to_ns(self.subframe),
            payload_bits: self.wifi.payload_bits,
        }
    }
}

/// Outcome of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimRun {
    pub run: usize,
    pub trace: SimTrace,
    pub throughputs: EpochThroughputs,
    pub report: MetricsReport,
    /// Mean decision over every epoch after the first.
    pub mean_decision: Decision,
}

/// Static rates the SBS knows up front.
struct Links {
    prims: RatePrimitives,
    sue_clean: Vec<f64>,
}

impl Links {
    fn new(config: &SimConfig) -> Result<Self> {
        let prims = RatePrimitives::from_environment(&config.env, &config.wifi, config.lte_cap)?;
        let mut clean_env = config.env.clone();
        clean_env.i_mbs_sue.iter_mut().for_each(|i| *i = 0.0);
        let clean = RatePrimitives::from_environment(&clean_env, &config.wifi, config.lte_cap)?;
        Ok(Self {
            prims,
            sue_clean: clean.s_f_l,
        })
    }

    fn licensed(&self) -> LicensedLink {
        LicensedLink {
            mue_noabs: self.prims.s_m_noabs.clone(),
            mue_abs: self.prims.s_m_abs.clone(),
            sue_interfered: self.prims.s_f_l.clone(),
            sue_clean: self.sue_clean.clone(),
        }
    }

    /// Optimizer input as the SBS sees it: measured licensed SUE rates under
    /// `rb_usage`, and `n_sta` stations sharing the channel.
    fn measured(
        &self,
        wifi: &WifiMacParams,
        rb_usage: f64,
        n_sta: usize,
        load: f64,
    ) -> Result<BalancerInput> {
        let s_f_l = self
            .prims
            .s_f_l
            .iter()
            .zip(&self.sue_clean)
            .map(|(&i, &c)| rb_usage * i + (1.0 - rb_usage) * c)
            .collect();
        let wifi = WifiMacParams {
            n_stations: n_sta,
            ..wifi.clone()
        };
        let s_w_hat = (0..n_sta)
            .map(|w| wifi_exclusive_throughput(&wifi, w))
            .collect::<Result<Vec<_>>>()?;
        Ok(BalancerInput::new(
            RatePrimitives {
                s_f_l,
                s_w_hat,
                ..self.prims.clone()
            },
            load,
        ))
    }
}

fn decide(policy: Policy, input: &BalancerInput, previous: Option<Decision>) -> Decision {
    let fallback = |d: Option<Decision>| d.unwrap_or(Decision::unchecked(input.r_bar_w, 1.0));
    match policy {
        Policy::Fixed(d) => d,
        Policy::Baseline(c) => solve_case(input, c).unwrap_or_else(|_| fallback(previous)),
        Policy::Holistic if input.rates.n_sta() == 0 => {
            // Nobody to protect: occupy the unlicensed channel fully.
            solve_case(input, BaselineCase::NoMutingUnlicensed)
                .unwrap_or_else(|_| fallback(previous))
        }
        Policy::Holistic => solve_holistic(input).map_or_else(|_| fallback(previous), |(d, _)| d),
    }
}

fn add_to(acc: &mut [f64], x: &[f64]) {
    acc.iter_mut().zip(x).for_each(|(a, b)| *a += b);
}

/// One seeded run; `run` selects an independent random stream.
pub fn run_simulation(config: &SimConfig, policy: Policy, run: usize) -> Result<SimRun> {
    config.validate()?;
    if let Policy::Fixed(d) = policy {
        Decision::new(d.alpha, d.beta)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(run as u64);

    let links = Links::new(config)?;
    let link = links.licensed();
    let n_sta = config.wifi.n_stations;
    let traffic = match config.lambda_wlan {
        None => Traffic::Saturated,
        Some(l) => Traffic::Poisson(l),
    };
    let dcf = DcfState::new(
        n_sta,
        config.wifi.cw_min,
        config.wifi.retry_stages,
        traffic,
        &mut rng,
    );
    let timing = config.timing();
    let mut channel = UnlicensedChannel::new(dcf, timing, config.record_segments);
    let mut mue_traffic = match config.lambda_mue {
        None => MueTraffic::full_buffer(link.mue_noabs.len()),
        Some(l) => MueTraffic::poisson(
            link.mue_noabs.len(),
            l,
            config.wifi.payload_bits,
            config.subframe,
        ),
    };

    let n_sf = config.subframes_per_epoch();
    let epoch_ns = secs_to_ns(config.epoch);
    let (mut round_alpha, mut round_beta) = (CarryRounder::default(), CarryRounder::default());
    let mut debt: Nanos = 0;
    let mut load = config.initial_load;
    let mut previous: Option<Decision> = None;
    let mut epochs: Vec<EpochRecord> = Vec::with_capacity(config.n_epochs());

    let n_mue = link.mue_noabs.len();
    let n_sue = link.sue_clean.len();
    let mut mue_bits = vec![0.0; n_mue];
    let mut sue_bits = vec![0.0; n_sue];
    let mut sta_bits = vec![0.0; n_sta];

    for k in 0..config.n_epochs() {
        let input = if k == 0 {
            links.measured(&config.wifi, 1.0, n_sta, load)?
        } else {
            if let Ok((l, _)) = estimate::load_from_epochs(&epochs, config.estimation_window) {
                load = l;
            }
            let heard = estimate::stas_from_epochs(&epochs, config.estimation_window).len();
            let rb_usage = epochs.last().map_or(1.0, |e| e.rb_usage);
            links.measured(&config.wifi, rb_usage, heard, load)?
        };
        let d = decide(policy, &input, previous);
        previous = Some(d);

        let mut muted = round_alpha.round(d.alpha * f64::from(n_sf), n_sf);
        let owed = (debt / timing.subframe).min(Nanos::from(muted)) as u32;
        muted -= owed;
        debt -= Nanos::from(owed) * timing.subframe;
        let schedule = EpochSchedule {
            decision: d,
            mute_unlicensed: muted,
            tx_licensed: round_beta.round(d.beta * f64::from(n_sf), n_sf),
            carryover: debt,
        };

        let start = k as Nanos * epoch_ns;
        let un = channel.run_epoch(start, start + epoch_ns, muted, &mut rng);
        debt += un.stolen;
        let lic = licensed_band_throughput(
            &schedule,
            &link,
            &mut mue_traffic,
            n_sf,
            config.subframe,
            &mut rng,
        );

        let laa_s = un.laa_tx as f64 / 1e9;
        let sue_u: Vec<f64> = links.prims.s_f_u.iter().map(|u| u * laa_s).collect();
        add_to(&mut mue_bits, &lic.mue_bits);
        add_to(&mut sue_bits, &lic.sue_bits);
        add_to(&mut sue_bits, &sue_u);
        add_to(&mut sta_bits, &un.sta_bits);
        epochs.push(EpochRecord {
            start,
            decision: d,
            muted_subframes: muted,
            licensed_subframes: schedule.tx_licensed,
            target: un.target,
            laa_start: un.laa_start,
            stolen: un.stolen,
            muted_observed: un.muted_observed,
            muted_busy: un.muted_busy,
            senders: un.senders,
            rb_usage: lic.rb_usage,
            mue_bits: lic.mue_bits,
            sue_licensed_bits: lic.sue_bits,
            sue_unlicensed_bits: sue_u,
            sta_bits: un.sta_bits,
        });
    }

    let run_end = config.n_epochs() as Nanos * epoch_ns;
    channel.rec.truncate(run_end);
    let UnlicensedChannel {
        rec,
        frames,
        laa_bursts,
        ..
    } = channel;
    let (segments, airtime, end) = rec.finish();
    let trace = SimTrace {
        segments,
        frames,
        laa_bursts,
        epochs,
        airtime,
        end,
    };

    let per_s = |v: Vec<f64>| v.into_iter().map(|b| b / config.run_length).collect();
    let throughputs = EpochThroughputs {
        mue: per_s(mue_bits),
        sue: per_s(sue_bits),
        sta: per_s(sta_bits),
    };
    let report = MetricsReport::from_throughputs(&throughputs)?;
    let later = &trace.epochs[1.min(trace.epochs.len() - 1)..];
    let n = later.len() as f64;
    let mean_decision = Decision::unchecked(
        later.iter().map(|e| e.decision.alpha).sum::<f64>() / n,
        later.iter().map(|e| e.decision.beta).sum::<f64>() / n,
    );
    Ok(SimRun {
        run,
        trace,
        throughputs,
        report,
        mean_decision,
    })
}

/// Compact per-run result kept by [`simulate_runs`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub run: usize,
    pub report: MetricsReport,
    pub throughputs: EpochThroughputs,
    pub mean_decision: Decision,
    /// Decision of every epoch, in order.
    pub decisions: Vec<Decision>,
    pub laa_airtime: f64,
}

/// `config.n_runs` independent runs, in run order.
pub fn simulate_runs(config: &SimConfig, policy: Policy) -> Result<Vec<RunResult>> {
    config.validate()?;
    (0..config.n_runs)
        .into_par_iter()
        .map(|run| {
            let r = run_simulation(config, policy, run)?;
            Ok(RunResult {
                run,
                laa_airtime: r.trace.laa_airtime_share(),
                decisions: r.trace.epochs.iter().map(|e| e.decision).collect(),
                report: r.report,
                throughputs: r.throughputs,
                mean_decision: r.mean_decision,
            })
        })
        .collect()
}

//! Scenario files.
//!
//! A scenario is a TOML document with the sections `[counts]`, `[radio]`,
//! `[wifi]`, `[lte]`, `[epoch]` and `[policy]`, plus an optional top-level
//! `r_bar_w`. Powers are in dBm and converted to watts here; every per-node
//! field takes either one value for the whole class or a list.
//!
//! ```toml
//! r_bar_w = 0.9
//!
//! [counts]
//! n_mue = 1
//! n_sue = 1
//! n_sta = 1
//!
//! [radio]
//! noise_dbm = -95.0
//! p_mbs_mue_dbm = -78.0
//! p_sbs_sue_dbm = -70.0
//! i_mbs_sue_dbm = -60.0
//! i_sbs_mue_dbm = -85.0
//! ```

use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::balancer::{BalancerInput, Decision};
use crate::baselines::BaselineCase;
use crate::error::{Error, Result};
use crate::rate_model::{
    busy_slot_duration, dbm_to_watts, path_loss, PathLossParams, Placement, RadioEnvironment,
    RatePrimitives, WifiMacParams, WifiPhy, LTE_MAC_CAP_BPS_PER_HZ,
};
use crate::sim::{Policy, SimConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerNode {
    All(f64),
    Each(Vec<f64>),
}

impl PerNode {
    fn expand(&self, n: usize, field: &str) -> Result<Vec<f64>> {
        match self {
            PerNode::All(v) => Ok(vec![*v; n]),
            PerNode::Each(v) if v.len() == n => Ok(v.clone()),
            PerNode::Each(v) => Err(Error::Scenario(format!(
                "`{field}` lists {} values for {n} nodes",
                v.len()
            ))),
        }
    }

    fn set_all(&mut self, v: f64) {
        *self = PerNode::All(v);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Counts {
    pub n_mue: usize,
    pub n_sue: usize,
    pub n_sta: usize,
}

/// Link budgets, either as received/interference levels or as distances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Radio {
    pub noise_dbm: f64,
    #[serde(default = "default_bw")]
    pub licensed_bw_hz: f64,
    #[serde(default = "default_bw")]
    pub unlicensed_bw_hz: f64,
    pub p_mbs_mue_dbm: Option<PerNode>,
    pub p_sbs_sue_dbm: Option<PerNode>,
    /// Absent interference terms mean no interference.
    pub i_mbs_sue_dbm: Option<PerNode>,
    pub i_sbs_mue_dbm: Option<PerNode>,
    pub i_wlan_sue_dbm: Option<PerNode>,
    pub geometry: Option<Geometry>,
}

fn default_bw() -> f64 {
    20e6
}

/// Distances from each UE to both base stations, m.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Geometry {
    #[serde(default = "default_mbs_dbm")]
    pub mbs_tx_dbm: f64,
    #[serde(default = "default_sbs_dbm")]
    pub sbs_tx_dbm: f64,
    pub mue_to_mbs_m: PerNode,
    pub mue_to_sbs_m: PerNode,
    pub sue_to_sbs_m: PerNode,
    pub sue_to_mbs_m: PerNode,
    /// SUEs (and their SBS links) are indoor when true.
    #[serde(default)]
    pub sue_indoor: bool,
    #[serde(default)]
    pub path_loss: Option<PathLossParams>,
}

fn default_mbs_dbm() -> f64 {
    43.0
}

fn default_sbs_dbm() -> f64 {
    23.0
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Wifi {
    /// Attempt probability; derived from the contention window when absent.
    pub tau: Option<f64>,
    pub payload_bytes: Option<f64>,
    pub cw_min: Option<u32>,
    pub retry_stages: Option<u32>,
    /// Per-STA arrivals in packets per `lambda_unit_ms`; saturated when absent.
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lte {
    /// Clamp LTE rates to the 75 Mbps-per-20 MHz MAC rate.
    #[serde(default)]
    pub mac_cap: bool,
    /// Per-MUE arrivals in packets per `lambda_unit_ms`; full buffer when absent.
    pub lambda_mue: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Epoch {
    #[serde(default = "default_epoch_ms")]
    pub t_ms: f64,
    #[serde(default = "default_run_ms")]
    pub run_length_ms: f64,
    #[serde(default = "default_runs")]
    pub n_runs: usize,
    #[serde(default)]
    pub seed: u64,
    /// Time unit of the arrival rates, ms.
    #[serde(default = "default_lambda_unit")]
    pub lambda_unit_ms: f64,
    #[serde(default = "default_window")]
    pub estimation_window: usize,
}

fn default_epoch_ms() -> f64 {
    20.0
}
fn default_run_ms() -> f64 {
    200.0
}
fn default_runs() -> usize {
    1000
}
fn default_lambda_unit() -> f64 {
    1000.0
}
fn default_window() -> usize {
    3
}

impl Default for Epoch {
    fn default() -> Self {
        Self {
            t_ms: default_epoch_ms(),
            run_length_ms: default_run_ms(),
            n_runs: default_runs(),
            seed: 0,
            lambda_unit_ms: default_lambda_unit(),
            estimation_window: default_window(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySpec {
    /// `holistic`, `case1`..`case5` or `fixed`.
    pub kind: String,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
}

impl Default for PolicySpec {
    fn default() -> Self {
        Self {
            kind: "holistic".into(),
            alpha: None,
            beta: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: String,
    /// WLAN offered load for analytic solves.
    pub r_bar_w: Option<f64>,
    pub counts: Counts,
    pub radio: Radio,
    #[serde(default)]
    pub wifi: Wifi,
    #[serde(default)]
    pub lte: Lte,
    #[serde(default)]
    pub epoch: Epoch,
    #[serde(default)]
    pub policy: PolicySpec,
}

/// Parameters a sweep can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    /// MBS interference at every SUE, dBm.
    InterferenceMbsSue,
    LambdaWlan,
    LambdaMue,
    RBarW,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::InterferenceMbsSue => "interference_mbs_sue",
            Axis::LambdaWlan => "lambda_wlan",
            Axis::LambdaMue => "lambda_mue",
            Axis::RBarW => "r_bar_w",
        }
    }

    /// Whether the axis only matters to the simulator.
    pub fn needs_simulation(self) -> bool {
        matches!(self, Axis::LambdaWlan | Axis::LambdaMue)
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Axis::InterferenceMbsSue,
            Axis::LambdaWlan,
            Axis::LambdaMue,
            Axis::RBarW,
        ]
        .into_iter()
        .find(|a| a.name() == s)
        .ok_or_else(|| Error::Scenario(format!("unknown axis `{s}`")))
    }
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self> {
        let s: Scenario = toml::from_str(text).map_err(|e| Error::Scenario(e.to_string()))?;
        s.environment()?;
        s.policy()?;
        Ok(s)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Scenario(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn environment(&self) -> Result<RadioEnvironment> {
        let c = &self.counts;
        let r = &self.radio;
        let watts =
            |field: &Option<PerNode>, n: usize, name: &str, required: bool| -> Result<Vec<f64>> {
                match field {
                    Some(p) => Ok(p.expand(n, name)?.into_iter().map(dbm_to_watts).collect()),
                    None if required && n > 0 => {
                        Err(Error::Scenario(format!("`radio.{name}` is required")))
                    }
                    None => Ok(vec![0.0; n]),
                }
            };
        let env = if let Some(g) = &r.geometry {
            let pl = g.path_loss.unwrap_or_default();
            let sue_place = if g.sue_indoor {
                Placement::Indoor
            } else {
                Placement::Outdoor
            };
            let rx = |tx: f64,
                      d: &PerNode,
                      n: usize,
                      name: &str,
                      place: Placement|
             -> Result<Vec<f64>> {
                d.expand(n, name)?
                    .into_iter()
                    .map(|d| Ok(dbm_to_watts(tx - path_loss(d, place, &pl)?)))
                    .collect()
            };
            RadioEnvironment {
                p_mbs_mue: rx(
                    g.mbs_tx_dbm,
                    &g.mue_to_mbs_m,
                    c.n_mue,
                    "mue_to_mbs_m",
                    Placement::Outdoor,
                )?,
                i_sbs_mue: rx(
                    g.sbs_tx_dbm,
                    &g.mue_to_sbs_m,
                    c.n_mue,
                    "mue_to_sbs_m",
                    Placement::Outdoor,
                )?,
                p_sbs_sue: rx(
                    g.sbs_tx_dbm,
                    &g.sue_to_sbs_m,
                    c.n_sue,
                    "sue_to_sbs_m",
                    sue_place,
                )?,
                i_mbs_sue: rx(
                    g.mbs_tx_dbm,
                    &g.sue_to_mbs_m,
                    c.n_sue,
                    "sue_to_mbs_m",
                    sue_place,
                )?,
                i_wlan_sue: watts(&r.i_wlan_sue_dbm, c.n_sue, "i_wlan_sue_dbm", false)?,
                noise: dbm_to_watts(r.noise_dbm),
                licensed_bw: r.licensed_bw_hz,
                unlicensed_bw: r.unlicensed_bw_hz,
            }
        } else {
            RadioEnvironment {
                p_mbs_mue: watts(&r.p_mbs_mue_dbm, c.n_mue, "p_mbs_mue_dbm", true)?,
                p_sbs_sue: watts(&r.p_sbs_sue_dbm, c.n_sue, "p_sbs_sue_dbm", true)?,
                i_mbs_sue: watts(&r.i_mbs_sue_dbm, c.n_sue, "i_mbs_sue_dbm", false)?,
                i_sbs_mue: watts(&r.i_sbs_mue_dbm, c.n_mue, "i_sbs_mue_dbm", false)?,
                i_wlan_sue: watts(&r.i_wlan_sue_dbm, c.n_sue, "i_wlan_sue_dbm", false)?,
                noise: dbm_to_watts(r.noise_dbm),
                licensed_bw: r.licensed_bw_hz,
                unlicensed_bw: r.unlicensed_bw_hz,
            }
        };
        env.validate()?;
        Ok(env)
    }

    pub fn wifi_params(&self) -> Result<WifiMacParams> {
        let mut p = WifiMacParams::standard(self.counts.n_sta);
        let w = &self.wifi;
        p.tau = w.tau;
        if let Some(b) = w.payload_bytes {
            p.payload_bits = b * 8.0;
            p.busy_slot = busy_slot_duration(&WifiPhy::default(), p.payload_bits, p.sifs, p.difs);
        }
        if let Some(cw) = w.cw_min {
            p.cw_min = cw;
        }
        if let Some(m) = w.retry_stages {
            p.retry_stages = m;
        }
        p.validate()?;
        Ok(p)
    }

    pub fn lte_cap(&self, paper_mode: bool) -> Option<f64> {
        (paper_mode || self.lte.mac_cap).then_some(LTE_MAC_CAP_BPS_PER_HZ)
    }

    pub fn rates(&self, paper_mode: bool) -> Result<RatePrimitives> {
        let wifi = self.wifi_params()?;
        RatePrimitives::from_environment(&self.environment()?, &wifi, self.lte_cap(paper_mode))
    }

    pub fn balancer_input(&self, paper_mode: bool) -> Result<BalancerInput> {
        let r = self
            .r_bar_w
            .ok_or_else(|| Error::Scenario("`r_bar_w` is required for analytic solves".into()))?;
        Ok(BalancerInput::new(self.rates(paper_mode)?, r))
    }

    pub fn policy(&self) -> Result<Policy> {
        let p = &self.policy;
        match p.kind.as_str() {
            "holistic" => Ok(Policy::Holistic),
            "fixed" => {
                let (Some(a), Some(b)) = (p.alpha, p.beta) else {
                    return Err(Error::Scenario(
                        "fixed policy needs `alpha` and `beta`".into(),
                    ));
                };
                Ok(Policy::Fixed(Decision::new(a, b)?))
            }
            other => other
                .parse::<BaselineCase>()
                .map(Policy::Baseline)
                .map_err(|_| Error::Scenario(format!("unknown policy `{other}`"))),
        }
    }

    /// Converts rates given per `lambda_unit_ms` to per second.
    fn per_second(&self, per_unit: f64) -> f64 {
        per_unit * 1000.0 / self.epoch.lambda_unit_ms
    }

    pub fn sim_config(&self, paper_mode: bool) -> Result<SimConfig> {
        let mut c = SimConfig::new(self.environment()?, self.wifi_params()?);
        c.epoch = self.epoch.t_ms * 1e-3;
        c.run_length = self.epoch.run_length_ms * 1e-3;
        c.n_runs = self.epoch.n_runs;
        c.seed = self.epoch.seed;
        c.estimation_window = self.epoch.estimation_window;
        c.lambda_wlan = self.wifi.lambda.map(|l| self.per_second(l));
        c.lambda_mue = self.lte.lambda_mue.map(|l| self.per_second(l));
        c.lte_cap = self.lte_cap(paper_mode);
        c.validate()?;
        Ok(c)
    }

    /// Copy with one parameter replaced.
    pub fn with_axis(&self, axis: Axis, value: f64) -> Result<Self> {
        let mut s = self.clone();
        match axis {
            Axis::InterferenceMbsSue => match &mut s.radio.i_mbs_sue_dbm {
                Some(p) => p.set_all(value),
                slot @ None => *slot = Some(PerNode::All(value)),
            },
            Axis::LambdaWlan => s.wifi.lambda = Some(value),
            Axis::LambdaMue => s.lte.lambda_mue = Some(value),
            Axis::RBarW => s.r_bar_w = Some(value),
        }
        if axis == Axis::InterferenceMbsSue && s.radio.geometry.is_some() {
            return Err(Error::Scenario(
                "interference sweeps need level-based radio, not geometry".into(),
            ));
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = r#"
r_bar_w = 0.9
[counts]
n_mue = 1
n_sue = 2
n_sta = 3
[radio]
noise_dbm = -95.0
p_mbs_mue_dbm = -78.0
p_sbs_sue_dbm = [-70.0, -72.0]
i_mbs_sue_dbm = -60.0
"#;

    #[test]
    fn parses_levels_and_defaults() {
        let s = Scenario::from_toml(BASIC).unwrap();
        let env = s.environment().unwrap();
        assert_eq!(env.n_sue(), 2);
        assert!((env.p_sbs_sue[1] - dbm_to_watts(-72.0)).abs() < 1e-20);
        assert_eq!(env.i_sbs_mue, vec![0.0]);
        assert_eq!(s.policy().unwrap(), Policy::Holistic);
        assert_eq!(s.epoch.t_ms, 20.0);
        assert_eq!(s.wifi_params().unwrap().n_stations, 3);
    }

    #[test]
    fn rejects_bad_lengths_and_unknown_fields() {
        let bad = BASIC.replace("[-70.0, -72.0]", "[-70.0]");
        assert!(matches!(Scenario::from_toml(&bad), Err(Error::Scenario(_))));
        let bad = BASIC.replace("noise_dbm", "nosie_dbm");
        assert!(Scenario::from_toml(&bad).is_err());
    }

    #[test]
    fn axis_override() {
        let s = Scenario::from_toml(BASIC).unwrap();
        let t = s.with_axis(Axis::InterferenceMbsSue, -80.0).unwrap();
        let env = t.environment().unwrap();
        assert!(env
            .i_mbs_sue
            .iter()
            .all(|&i| (i - dbm_to_watts(-80.0)).abs() < 1e-22));
        assert_eq!("r_bar_w".parse::<Axis>().unwrap(), Axis::RBarW);
        assert!("nope".parse::<Axis>().is_err());
    }

    #[test]
    fn geometry_mode() {
        let text = r#"
[counts]
n_mue = 1
n_sue = 1
n_sta = 1
[radio]
noise_dbm = -95.0
[radio.geometry]
mue_to_mbs_m = 200.0
mue_to_sbs_m = 100.0
sue_to_sbs_m = 10.0
sue_to_mbs_m = 300.0
"#;
        let env = Scenario::from_toml(text).unwrap().environment().unwrap();
        // 43 dBm - (40 + 35 log10 200) dB
        let expected = dbm_to_watts(43.0 - 40.0 - 35.0 * 200f64.log10());
        assert!((env.p_mbs_mue[0] / expected - 1.0).abs() < 1e-9);
    }
}

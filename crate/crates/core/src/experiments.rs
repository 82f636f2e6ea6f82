//! Scenario-driven experiments producing CSV tables.
//!
//! Every function here is deterministic in its inputs (seeded simulations
//! included) and writes rows in input order regardless of how work is spread
//! across threads.

use std::io::Write;

use rayon::prelude::*;

use crate::balancer::{solve_holistic, utility_log, Decision, KktCertificate};
use crate::baselines::{solve_case, BaselineCase};
use crate::error::{Error, Result};
use crate::metrics::{mean_ci, MetricsReport};
use crate::rate_model::{epoch_throughputs, EpochThroughputs, RatePrimitives};
use crate::scenario::{Axis, Scenario};
use crate::sim::{simulate_runs, RunResult};

/// Header shared by `solve` and `sweep` rows.
pub const SOLVE_COLUMNS: [&str; 9] = [
    "alpha",
    "beta",
    "candidate",
    "U_log",
    "s_m_mean",
    "s_f_mean",
    "s_w_mean",
    "jain",
    "total",
];

/// Flags that modify a scenario run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Options {
    /// Clamp LTE rates to the MAC-layer cap.
    pub paper_mode: bool,
    pub seed: Option<u64>,
    pub runs: Option<usize>,
}

/// One decision with its analytic (or simulated) outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveRow {
    pub alpha: f64,
    pub beta: f64,
    /// KKT candidate index, baseline name or `simulated`.
    pub candidate: String,
    pub u_log: f64,
    pub s_m_mean: f64,
    pub s_f_mean: f64,
    pub s_w_mean: f64,
    pub jain: f64,
    pub total: f64,
}

impl SolveRow {
    fn from_throughputs(d: Decision, candidate: String, t: &EpochThroughputs) -> Result<Self> {
        let mean = |v: &[f64]| {
            if v.is_empty() {
                0.0
            } else {
                v.iter().sum::<f64>() / v.len() as f64
            }
        };
        let report = MetricsReport::from_throughputs(t)?;
        let u_log = t.all().iter().map(|s| s.ln()).sum();
        Ok(Self {
            alpha: d.alpha,
            beta: d.beta,
            candidate,
            u_log,
            s_m_mean: mean(&t.mue),
            s_f_mean: mean(&t.sue),
            s_w_mean: mean(&t.sta),
            jain: report.jain,
            total: report.total,
        })
    }

    fn analytic(rates: &RatePrimitives, d: Decision, candidate: String) -> Result<Self> {
        let t = epoch_throughputs(rates, d)?;
        let mut row = Self::from_throughputs(d, candidate, &t)?;
        row.u_log = utility_log(rates, d).unwrap_or(f64::NEG_INFINITY);
        Ok(row)
    }

    pub fn record(&self) -> Vec<String> {
        vec![
            self.alpha.to_string(),
            self.beta.to_string(),
            self.candidate.clone(),
            self.u_log.to_string(),
            self.s_m_mean.to_string(),
            self.s_f_mean.to_string(),
            self.s_w_mean.to_string(),
            self.jain.to_string(),
            self.total.to_string(),
        ]
    }

    /// Inverse of [`SolveRow::record`].
    pub fn parse(fields: &[&str]) -> Result<Self> {
        if fields.len() != SOLVE_COLUMNS.len() {
            return Err(Error::Scenario(format!(
                "expected 9 fields, got {}",
                fields.len()
            )));
        }
        let num = |i: usize| {
            fields[i]
                .parse::<f64>()
                .map_err(|e| Error::Scenario(format!("column {}: {e}", SOLVE_COLUMNS[i])))
        };
        Ok(Self {
            alpha: num(0)?,
            beta: num(1)?,
            candidate: fields[2].to_string(),
            u_log: num(3)?,
            s_m_mean: num(4)?,
            s_f_mean: num(5)?,
            s_w_mean: num(6)?,
            jain: num(7)?,
            total: num(8)?,
        })
    }
}

fn csv_writer(out: impl Write) -> csv::Writer<impl Write> {
    csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out)
}

/// Holistic decision for the scenario's `r_bar_w` and its certificate.
pub fn cmd_solve(scenario: &Scenario, opts: &Options) -> Result<(SolveRow, KktCertificate)> {
    let input = scenario.balancer_input(opts.paper_mode)?;
    let (d, cert) = solve_holistic(&input)?;
    let row = SolveRow::analytic(&input.rates, d, cert.candidate.to_string())?;
    Ok((row, cert))
}

pub fn write_solve(row: &SolveRow, out: impl Write) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(SOLVE_COLUMNS)?;
    w.write_record(row.record())?;
    w.flush()?;
    Ok(())
}

/// Evenly spaced points from `from` to `to` inclusive.
pub fn sweep_points(from: f64, to: f64, steps: usize) -> Result<Vec<f64>> {
    match steps {
        0 => Err(Error::invalid("steps", "at least one point")),
        1 => Ok(vec![from]),
        n => Ok((0..n)
            .map(|i| from + (to - from) * i as f64 / (n - 1) as f64)
            .collect()),
    }
}

/// One sweep point: the axis value and either a row or the reason it failed.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub outcome: std::result::Result<SolveRow, String>,
}

/// Solves (or, for arrival-rate axes, simulates) the scenario at each point.
pub fn cmd_sweep(
    scenario: &Scenario,
    axis: Axis,
    points: &[f64],
    opts: &Options,
) -> Result<Vec<SweepPoint>> {
    let variants = points
        .iter()
        .map(|&v| scenario.with_axis(axis, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(points
        .par_iter()
        .zip(variants.par_iter())
        .map(|(&value, s)| {
            let outcome = if axis.needs_simulation() {
                simulated_row(s, opts)
            } else {
                cmd_solve(s, opts).map(|(row, _)| row)
            };
            SweepPoint {
                value,
                outcome: outcome.map_err(|e| e.to_string()),
            }
        })
        .collect())
}

pub fn write_sweep(axis: Axis, points: &[SweepPoint], out: impl Write) -> Result<()> {
    let mut w = csv_writer(out);
    let mut header = vec![axis.name()];
    header.extend(SOLVE_COLUMNS);
    header.push("status");
    w.write_record(&header)?;
    for p in points {
        let mut rec = vec![p.value.to_string()];
        match &p.outcome {
            Ok(row) => {
                rec.extend(row.record());
                rec.push("ok".into());
            }
            Err(e) => {
                rec.extend(std::iter::repeat_n(String::new(), SOLVE_COLUMNS.len()));
                rec.push(e.clone());
            }
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

fn sim_runs(scenario: &Scenario, opts: &Options) -> Result<Vec<RunResult>> {
    let mut config = scenario.sim_config(opts.paper_mode)?;
    if let Some(seed) = opts.seed {
        config.seed = seed;
    }
    if let Some(runs) = opts.runs {
        config.n_runs = runs;
    }
    simulate_runs(&config, scenario.policy()?)
}

fn simulated_row(scenario: &Scenario, opts: &Options) -> Result<SolveRow> {
    let runs = sim_runs(scenario, opts)?;
    let n = runs.len() as f64;
    let avg = |f: &dyn Fn(&RunResult) -> &[f64]| -> Vec<f64> {
        let len = f(&runs[0]).len();
        (0..len)
            .map(|i| runs.iter().map(|r| f(r)[i]).sum::<f64>() / n)
            .collect()
    };
    let t = EpochThroughputs {
        mue: avg(&|r| &r.throughputs.mue),
        sue: avg(&|r| &r.throughputs.sue),
        sta: avg(&|r| &r.throughputs.sta),
    };
    let d = Decision::unchecked(
        runs.iter().map(|r| r.mean_decision.alpha).sum::<f64>() / n,
        runs.iter().map(|r| r.mean_decision.beta).sum::<f64>() / n,
    );
    let mut row = SolveRow::from_throughputs(d, "simulated".into(), &t)?;
    row.jain = runs.iter().map(|r| r.report.jain).sum::<f64>() / n;
    Ok(row)
}

/// Per-run results of the scenario's simulation.
pub fn cmd_simulate(scenario: &Scenario, opts: &Options) -> Result<Vec<RunResult>> {
    sim_runs(scenario, opts)
}

pub const SIMULATE_COLUMNS: [&str; 9] = [
    "row",
    "alpha",
    "beta",
    "laa_airtime",
    "wlan",
    "mbs",
    "sbs",
    "total",
    "jain",
];

/// One row per run, then `mean` and `ci95` rows, then the mean decision of
/// each epoch across runs as `epoch<k>` rows (remaining columns empty).
pub fn write_simulate(runs: &[RunResult], out: impl Write) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(SIMULATE_COLUMNS)?;
    let values = |r: &RunResult| {
        [
            r.mean_decision.alpha,
            r.mean_decision.beta,
            r.laa_airtime,
            r.report.wlan,
            r.report.mbs,
            r.report.sbs,
            r.report.total,
            r.report.jain,
        ]
    };
    let rec = |label: String, v: &[f64]| -> Vec<String> {
        std::iter::once(label)
            .chain(v.iter().map(f64::to_string))
            .collect()
    };
    for r in runs {
        w.write_record(rec(r.run.to_string(), &values(r)))?;
    }
    if runs.len() >= 2 {
        let mut mean = [0.0; 8];
        let mut half = [0.0; 8];
        for i in 0..8 {
            let col: Vec<f64> = runs.iter().map(|r| values(r)[i]).collect();
            (mean[i], half[i]) = mean_ci(&col, 0.95)?;
        }
        w.write_record(rec("mean".into(), &mean))?;
        w.write_record(rec("ci95".into(), &half))?;
    }
    let n_epochs = runs.first().map_or(0, |r| r.decisions.len());
    let n = runs.len() as f64;
    for k in 0..n_epochs {
        let a = runs.iter().map(|r| r.decisions[k].alpha).sum::<f64>() / n;
        let b = runs.iter().map(|r| r.decisions[k].beta).sum::<f64>() / n;
        let mut fields = vec![format!("epoch{k}"), a.to_string(), b.to_string()];
        fields.extend(std::iter::repeat_n(String::new(), 6));
        w.write_record(&fields)?;
    }
    w.flush()?;
    Ok(())
}

/// Analytic comparison of the holistic scheme against every baseline at the
/// scenario's `r_bar_w`.
pub fn cmd_compare(scenario: &Scenario, opts: &Options) -> Result<Vec<(String, SolveRow)>> {
    let input = scenario.balancer_input(opts.paper_mode)?;
    let (d, cert) = solve_holistic(&input)?;
    let mut rows = vec![(
        "holistic".to_string(),
        SolveRow::analytic(&input.rates, d, cert.candidate.to_string())?,
    )];
    for case in BaselineCase::ALL {
        let d = solve_case(&input, case)?;
        rows.push((
            case.to_string(),
            SolveRow::analytic(&input.rates, d, case.to_string())?,
        ));
    }
    Ok(rows)
}

pub fn write_compare(rows: &[(String, SolveRow)], out: impl Write) -> Result<()> {
    let mut w = csv_writer(out);
    let mut header = vec!["scheme"];
    header.extend(SOLVE_COLUMNS);
    w.write_record(&header)?;
    for (name, row) in rows {
        let mut rec = vec![name.clone()];
        rec.extend(row.record());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Jain ordering of the fairness comparison table, best first.
pub const DEFAULT_ORDER: &str = "case4,holistic,case3,case5,case1,case2";

/// Checks that the Jain index strictly decreases along `order`
/// (comma-separated scheme names).
pub fn check_order(rows: &[(String, SolveRow)], order: &str) -> Result<()> {
    let jain = |name: &str| {
        rows.iter()
            .find(|(n, _)| n == name)
            .map(|(_, r)| r.jain)
            .ok_or_else(|| Error::invalid("assert-order", format!("unknown scheme `{name}`")))
    };
    let names: Vec<&str> = order.split(',').map(str::trim).collect();
    for pair in names.windows(2) {
        let (a, b) = (jain(pair[0])?, jain(pair[1])?);
        if !(a > b) {
            return Err(Error::InsufficientData(format!(
                "ordering violated: jain({}) = {a:.4} is not above jain({}) = {b:.4}",
                pair[0], pair[1]
            )));
        }
    }
    Ok(())
}

/// Process exit code for an error: 2 for unreadable or malformed input, 3 when
/// the model has no valid decision, 4 for anything else.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Scenario(_)
        | Error::Io(_)
        | Error::InvalidParameter { .. }
        | Error::UnknownNode { .. } => 2,
        Error::ZeroWifiLoad(_)
        | Error::NoFeasibleCandidate
        | Error::InconsistentCandidates(_)
        | Error::UndefinedUtility(_)
        | Error::EmptyFeasibleSet(_)
        | Error::DecisionOutOfRange { .. } => 3,
        Error::NoConvergence { .. } | Error::InsufficientData(_) => 4,
    }
}

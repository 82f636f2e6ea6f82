//! Efficiency, Jain fairness and cross-run confidence intervals.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::rate_model::EpochThroughputs;

/// Per-node throughputs below this are reported as zero.
pub const ZERO_FLOOR_BPS: f64 = 1.0;

/// `(sum s)^2 / (N sum s^2)`.
pub fn jain_index(throughputs: &[f64]) -> Result<f64> {
    if throughputs.is_empty() {
        return Err(Error::InsufficientData("Jain index of an empty set".into()));
    }
    if let Some(s) = throughputs.iter().find(|s| !(**s >= 0.0)) {
        return Err(Error::invalid("throughput", format!("{s} is negative")));
    }
    let sum: f64 = throughputs.iter().sum();
    let sum_sq: f64 = throughputs.iter().map(|s| s * s).sum();
    if sum_sq == 0.0 {
        return Err(Error::InsufficientData("all throughputs are zero".into()));
    }
    Ok(sum * sum / (throughputs.len() as f64 * sum_sq))
}

pub fn efficiency(throughputs: &[f64]) -> f64 {
    throughputs.iter().sum()
}

/// Aggregates of one run or one analytic evaluation, bps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    /// All STAs.
    pub wlan: f64,
    /// All MUEs.
    pub mbs: f64,
    /// All SUEs, both bands.
    pub sbs: f64,
    pub total: f64,
    pub jain: f64,
}

impl MetricsReport {
    pub fn from_throughputs(t: &EpochThroughputs) -> Result<Self> {
        let floor = |v: &[f64]| -> Vec<f64> {
            v.iter()
                .map(|&s| if s < ZERO_FLOOR_BPS { 0.0 } else { s })
                .collect()
        };
        let (mue, sue, sta) = (floor(&t.mue), floor(&t.sue), floor(&t.sta));
        let all: Vec<f64> = mue.iter().chain(&sue).chain(&sta).copied().collect();
        let (wlan, mbs, sbs) = (efficiency(&sta), efficiency(&mue), efficiency(&sue));
        Ok(Self {
            wlan,
            mbs,
            sbs,
            total: wlan + mbs + sbs,
            jain: jain_index(&all)?,
        })
    }

    fn fields(&self) -> [f64; 5] {
        [self.wlan, self.mbs, self.sbs, self.total, self.jain]
    }

    fn from_fields(f: [f64; 5]) -> Self {
        Self {
            wlan: f[0],
            mbs: f[1],
            sbs: f[2],
            total: f[3],
            jain: f[4],
        }
    }
}

/// Mean and confidence half-width of every field across runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub n_runs: usize,
    pub mean: MetricsReport,
    pub half_width: MetricsReport,
}

/// Mean and normal-approximation half-width `z * s / sqrt(n)` using the
/// sample standard deviation.
pub fn mean_ci(values: &[f64], confidence: f64) -> Result<(f64, f64)> {
    if values.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "{} run(s); at least 2 needed",
            values.len()
        )));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::invalid(
            "confidence",
            format!("{confidence} not in (0, 1)"),
        ));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let z = Normal::standard().inverse_cdf(0.5 + confidence / 2.0);
    Ok((mean, z * (var / n).sqrt()))
}

pub fn summarize_runs(per_run: &[MetricsReport], confidence: f64) -> Result<RunSummary> {
    let mut mean = [0.0; 5];
    let mut half = [0.0; 5];
    for i in 0..5 {
        let column: Vec<f64> = per_run.iter().map(|r| r.fields()[i]).collect();
        (mean[i], half[i]) = mean_ci(&column, confidence)?;
    }
    Ok(RunSummary {
        n_runs: per_run.len(),
        mean: MetricsReport::from_fields(mean),
        half_width: MetricsReport::from_fields(half),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jain_examples() {
        assert!((jain_index(&[5.0; 4]).unwrap() - 1.0).abs() < 1e-15);
        assert!((jain_index(&[7.0, 0.0, 0.0, 0.0]).unwrap() - 0.25).abs() < 1e-15);
        assert!((jain_index(&[1.0, 2.0, 3.0]).unwrap() - 6.0 / 7.0).abs() < 1e-15);
        assert!(jain_index(&[0.0, 0.0]).is_err());
        assert!(jain_index(&[]).is_err());
    }

    #[test]
    fn efficiency_examples() {
        assert_eq!(efficiency(&[]), 0.0);
        assert_eq!(efficiency(&[1.0, 2.0, 3.0]), 6.0);
    }

    #[test]
    fn ci_examples() {
        let (m, h) = mean_ci(&[10.0, 20.0], 0.95).unwrap();
        assert_eq!(m, 15.0);
        assert!((h - 1.959964 * 5.0).abs() < 1e-5, "{h}");
        let (_, h) = mean_ci(&[3.0; 10], 0.95).unwrap();
        assert_eq!(h, 0.0);
        assert!(mean_ci(&[1.0], 0.95).is_err());
    }
}

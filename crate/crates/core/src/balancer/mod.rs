//! Proportional-fair choice of the unlicensed muting fraction `alpha` and the
//! licensed transmission fraction `beta`.
//!
//! The objective is the sum of natural logs of every node's epoch throughput,
//! subject to `alpha <= r_bar_w` (the SBS leaves the WLAN at least its offered
//! load), `alpha <= beta`, and unit-interval bounds. It is concave, so any
//! point meeting the KKT conditions is optimal. [`solve_holistic`] enumerates
//! the six active-set combinations that can hold at an optimum, solves each
//! stationarity system by bisection and keeps the ones that are primal and
//! dual feasible.

mod candidates;
mod oracle;

use serde::{Deserialize, Serialize};

pub use candidates::{check_kkt, solve_candidate, CANDIDATES};
pub use oracle::grid_oracle;

use crate::error::{Error, Result};
use crate::rate_model::{epoch_throughputs, RatePrimitives};
pub use crate::roots::EPS;

/// Absolute/relative slack used by the feasibility checks.
pub const KKT_TOL: f64 = 1e-9;
/// Feasible candidates whose utilities differ by more than this are reported
/// as inconsistent.
pub const CONSISTENCY_TOL: f64 = 1e-6;

/// Muting and transmission fractions for one epoch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    /// Fraction of the epoch the SBS is muted on the unlicensed channel.
    pub alpha: f64,
    /// Fraction of the epoch the SBS transmits on the licensed carrier.
    pub beta: f64,
}

impl Decision {
    /// Checks both fractions lie in `[0, 1]`. The coupling `alpha <= beta` is
    /// not enforced here since some baselines deliberately break it.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&beta) {
            return Err(Error::DecisionOutOfRange { alpha, beta });
        }
        Ok(Self { alpha, beta })
    }

    pub const fn unchecked(alpha: f64, beta: f64) -> Self {
        Self { alpha, beta }
    }

    /// All optimizer constraints, within `tol`.
    pub fn is_feasible(&self, r_bar_w: f64, tol: f64) -> bool {
        self.alpha >= EPS - tol
            && self.alpha <= 1.0 + tol
            && self.beta >= -tol
            && self.beta <= 1.0 + tol
            && self.alpha <= r_bar_w + tol
            && self.alpha <= self.beta + tol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalancerInput {
    pub rates: RatePrimitives,
    /// Normalized WiFi offered load on the unlicensed channel.
    pub r_bar_w: f64,
}

impl BalancerInput {
    pub fn new(rates: RatePrimitives, r_bar_w: f64) -> Self {
        Self { rates, r_bar_w }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_bar_w > 0.0) {
            return Err(Error::ZeroWifiLoad(self.r_bar_w));
        }
        if self.r_bar_w > 1.0 {
            return Err(Error::invalid(
                "r_bar_w",
                format!("{} exceeds 1", self.r_bar_w),
            ));
        }
        self.rates.validate()?;
        let r = &self.rates;
        if r.n_mue() + r.n_sue() + r.n_sta() == 0 {
            return Err(Error::invalid("counts", "no nodes"));
        }
        if let Some(m) = r.s_m_abs.iter().position(|&b| b <= 0.0) {
            return Err(Error::UndefinedUtility(format!(
                "MUE {m} has zero rate in every regime"
            )));
        }
        if let Some(f) = (0..r.n_sue()).find(|&f| r.s_f_l[f] <= 0.0 && r.s_f_u[f] <= 0.0) {
            return Err(Error::UndefinedUtility(format!(
                "SUE {f} has zero rate on both bands"
            )));
        }
        if let Some(w) = r.s_w_hat.iter().position(|&s| s <= 0.0) {
            return Err(Error::UndefinedUtility(format!(
                "STA {w} has zero exclusive rate"
            )));
        }
        Ok(())
    }
}

/// Which candidate produced a decision, its multipliers and feasibility verdicts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KktCertificate {
    /// 1..=6.
    pub candidate: u8,
    /// Multipliers for, in order: `alpha <= r_bar_w`, `alpha <= beta`,
    /// `alpha >= 0`, `alpha <= 1`, `beta >= 0`, `beta <= 1`.
    pub lambdas: [f64; 6],
    /// False when the candidate's stationarity system has no solution in the
    /// unit interval.
    pub stationary: bool,
    pub primal_ok: bool,
    pub dual_ok: bool,
    /// Objective value at the decision, `-inf` where undefined.
    pub utility: f64,
}

impl KktCertificate {
    pub fn feasible(&self) -> bool {
        self.stationary && self.primal_ok && self.dual_ok
    }
}

/// Sum of natural-log epoch throughputs over every node.
pub fn utility_log(rates: &RatePrimitives, d: Decision) -> Result<f64> {
    let t = epoch_throughputs(rates, d)?;
    let mut u = 0.0;
    for (i, s) in t.all().into_iter().enumerate() {
        if !(s > 0.0) {
            return Err(Error::UndefinedUtility(format!(
                "node {i} has throughput {s} at alpha={}, beta={}",
                d.alpha, d.beta
            )));
        }
        u += s.ln();
    }
    Ok(u)
}

/// Partial derivatives of the utility.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Gradient {
    pub d_alpha: f64,
    pub d_beta: f64,
    /// Sum of absolute values of every term; scales the dual tolerance.
    pub scale: f64,
}

pub(crate) fn gradient(rates: &RatePrimitives, alpha: f64, beta: f64) -> Gradient {
    let mut d_alpha = rates.n_sta() as f64 / alpha;
    let mut d_beta = 0.0;
    let mut scale = d_alpha.abs();
    for (&a, &b) in rates.s_m_noabs.iter().zip(&rates.s_m_abs) {
        let t = (a - b) / (beta * a + (1.0 - beta) * b);
        d_beta += t;
        scale += t.abs();
    }
    for (&l, &u) in rates.s_f_l.iter().zip(&rates.s_f_u) {
        let s = beta * l + (1.0 - alpha) * u;
        // A zero rate contributes nothing even where the SUE throughput vanishes.
        let ta = if u == 0.0 { 0.0 } else { u / s };
        let tb = if l == 0.0 { 0.0 } else { l / s };
        d_alpha -= ta;
        d_beta += tb;
        scale += ta.abs() + tb.abs();
    }
    Gradient {
        d_alpha,
        d_beta,
        scale,
    }
}

/// Holistic decision: the best KKT-feasible candidate.
///
/// Utilities within [`KKT_TOL`] of the best are treated as tied and resolved
/// toward larger `beta`, then larger `alpha`, then the lower candidate index.
pub fn solve_holistic(input: &BalancerInput) -> Result<(Decision, KktCertificate)> {
    input.validate()?;
    let mut feasible = Vec::new();
    for k in CANDIDATES {
        let (d, cert) = solve_candidate(input, k)?;
        if cert.feasible() {
            feasible.push((d, cert));
        }
    }
    let best_u = feasible
        .iter()
        .map(|(_, c)| c.utility)
        .fold(f64::NEG_INFINITY, f64::max);
    if feasible.is_empty() || !best_u.is_finite() {
        return Err(Error::NoFeasibleCandidate);
    }
    let spread_tol = CONSISTENCY_TOL * (1.0 + best_u.abs());
    if let Some((_, worst)) = feasible
        .iter()
        .find(|(_, c)| best_u - c.utility > spread_tol)
    {
        return Err(Error::InconsistentCandidates(format!(
            "candidate {} reaches {} but the best feasible utility is {}",
            worst.candidate, worst.utility, best_u
        )));
    }
    let tie_tol = KKT_TOL * (1.0 + best_u.abs());
    let winner = feasible
        .into_iter()
        .filter(|(_, c)| best_u - c.utility <= tie_tol)
        .reduce(|best, next| {
            let (bd, nd) = (best.0, next.0);
            let better = nd.beta > bd.beta + KKT_TOL
                || ((nd.beta - bd.beta).abs() <= KKT_TOL && nd.alpha > bd.alpha + KKT_TOL);
            if better {
                next
            } else {
                best
            }
        })
        .expect("nonempty");
    Ok(winner)
}

/// Closed-form muting fraction for one SUE with licensed throughput `t_f_l`
/// and unlicensed rate `s_f_u` contending with `n_w` stations, ignoring the
/// load and coupling constraints. The flag reports whether the raw value
/// exceeded 1 and was clamped.
pub fn alpha_single_sue(t_f_l: f64, s_f_u: f64, n_w: usize) -> Result<(f64, bool)> {
    if !(s_f_u > 0.0) {
        return Err(Error::invalid("s_f_u", "must be positive"));
    }
    if n_w < 1 {
        return Err(Error::invalid("n_w", "at least one station required"));
    }
    if !(t_f_l >= 0.0) {
        return Err(Error::invalid("t_f_l", "must be nonnegative"));
    }
    let n = n_w as f64;
    let raw = n * (t_f_l + s_f_u) / (s_f_u * (n + 1.0));
    Ok(if raw > 1.0 { (1.0, true) } else { (raw, false) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_each(a: f64, b: f64, l: f64, u: f64, w: f64) -> RatePrimitives {
        RatePrimitives {
            s_m_noabs: vec![a],
            s_m_abs: vec![b],
            s_f_l: vec![l],
            s_f_u: vec![u],
            s_w_hat: vec![w],
        }
    }

    #[test]
    fn utility_examples() {
        let r = one_each(1.0, 1.0, 1.0, 0.0, 1.0);
        assert!(
            utility_log(&r, Decision::unchecked(1.0, 1.0))
                .unwrap()
                .abs()
                < 1e-15
        );

        let r = RatePrimitives {
            s_m_noabs: vec![],
            s_m_abs: vec![],
            s_f_l: vec![],
            s_f_u: vec![],
            s_w_hat: vec![2.0],
        };
        assert!(
            utility_log(&r, Decision::unchecked(0.5, 0.5))
                .unwrap()
                .abs()
                < 1e-15
        );

        let r = one_each(10.0, 20.0, 30.0, 40.0, 50.0);
        let u = utility_log(&r, Decision::unchecked(0.5, 0.75)).unwrap();
        let oracle = 12.5f64.ln() + 42.5f64.ln() + 25.0f64.ln();
        assert!((u - oracle).abs() < 1e-12);
        assert!((u - 9.4941).abs() < 1e-4);

        assert!(matches!(
            utility_log(&r, Decision::unchecked(0.0, 0.5)),
            Err(Error::UndefinedUtility(_))
        ));
    }

    #[test]
    fn symmetric_degenerate_instance() {
        let input = BalancerInput::new(one_each(5.0, 5.0, 3.0, 3.0, 7.0), 1.0);
        let (d, cert) = solve_holistic(&input).unwrap();
        assert!(
            (d.alpha - 1.0).abs() < 1e-6 && (d.beta - 1.0).abs() < 1e-6,
            "{d:?}"
        );
        assert!(cert.feasible());
    }

    #[test]
    fn zero_load_is_rejected() {
        let input = BalancerInput::new(one_each(5.0, 5.0, 3.0, 3.0, 7.0), 0.0);
        assert!(matches!(
            solve_holistic(&input),
            Err(Error::ZeroWifiLoad(_))
        ));
    }

    #[test]
    fn single_sue_examples() {
        assert_eq!(alpha_single_sue(0.0, 4.0, 1).unwrap(), (0.5, false));
        assert_eq!(alpha_single_sue(4.0, 4.0, 1).unwrap(), (1.0, false));
        let raw = 3.0 * 3.0 / 4.0;
        assert!(raw > 2.24 && raw < 2.26);
        assert_eq!(alpha_single_sue(8.0, 4.0, 3).unwrap(), (1.0, true));
        assert!(alpha_single_sue(1.0, 0.0, 1).is_err());
    }
}

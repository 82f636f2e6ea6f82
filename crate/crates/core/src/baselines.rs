//! Single-band comparison schemes.
//!
//! Each scheme fixes one of `alpha`, `beta` (or decouples them) and picks the
//! rest by a one-dimensional proportional-fair rule, so all of them reduce to
//! maximizing `sum_i w_i ln(a_i + b_i x)` over an interval.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::balancer::{BalancerInput, Decision, EPS};
use crate::error::{Error, Result};
use crate::roots::concave_argmax;

/// One `weight * ln(a + b x)` term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PfTerm {
    pub weight: f64,
    pub a: f64,
    pub b: f64,
}

impl PfTerm {
    pub const fn new(weight: f64, a: f64, b: f64) -> Self {
        Self { weight, a, b }
    }
}

/// Maximizer of `sum w ln(a + b x)` on `[lower, upper]`.
///
/// The search is restricted to the sub-interval where every term is positive;
/// within it the derivative is decreasing and is bisected to a sign change.
pub fn solve_pf_1d(terms: &[PfTerm], lower: f64, upper: f64) -> Result<f64> {
    if !(lower <= upper) {
        return Err(Error::invalid(
            "interval",
            format!("[{lower}, {upper}] is empty"),
        ));
    }
    let (mut lo, mut hi) = (lower, upper);
    for t in terms {
        if !(t.weight > 0.0) {
            return Err(Error::invalid(
                "weight",
                format!("{} is not positive", t.weight),
            ));
        }
        if t.b == 0.0 {
            if t.a <= 0.0 {
                return Err(Error::UndefinedUtility(format!(
                    "term {} + 0x is never positive",
                    t.a
                )));
            }
        } else if t.b > 0.0 {
            lo = lo.max(-t.a / t.b);
        } else {
            hi = hi.min(-t.a / t.b);
        }
    }
    if !(lo < hi) && !(lo == hi && terms.iter().all(|t| t.a + t.b * lo > 0.0)) {
        return Err(Error::UndefinedUtility(format!(
            "objective undefined on [{lower}, {upper}]"
        )));
    }
    let derivative = |x: f64| -> f64 {
        terms
            .iter()
            .map(|t| {
                let s = t.a + t.b * x;
                if s > 0.0 {
                    t.weight * t.b / s
                } else {
                    // Boundary of the domain: the term dominates and pushes inward.
                    t.b.signum() * f64::INFINITY
                }
            })
            .sum()
    };
    Ok(concave_argmax(derivative, lo, hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaselineCase {
    /// SBS always transmits on licensed; PF muting on unlicensed only.
    NoMutingLicensed,
    /// SBS never mutes on unlicensed; PF ABS ratio on licensed only.
    NoMutingUnlicensed,
    /// SBS never transmits on licensed; PF split of the unlicensed channel.
    NoTxLicensed,
    /// SBS never transmits on unlicensed; PF ABS ratio on licensed.
    NoTxUnlicensed,
    /// Each band's PF rule solved on its own, ignoring `alpha <= beta`.
    IndependentMuting,
}

impl BaselineCase {
    pub const ALL: [BaselineCase; 5] = [
        BaselineCase::NoMutingLicensed,
        BaselineCase::NoMutingUnlicensed,
        BaselineCase::NoTxLicensed,
        BaselineCase::NoTxUnlicensed,
        BaselineCase::IndependentMuting,
    ];

    /// 1-based case number.
    pub fn number(self) -> u8 {
        match self {
            BaselineCase::NoMutingLicensed => 1,
            BaselineCase::NoMutingUnlicensed => 2,
            BaselineCase::NoTxLicensed => 3,
            BaselineCase::NoTxUnlicensed => 4,
            BaselineCase::IndependentMuting => 5,
        }
    }
}

impl fmt::Display for BaselineCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "case{}", self.number())
    }
}

impl FromStr for BaselineCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BaselineCase::ALL
            .into_iter()
            .find(|c| c.to_string() == s)
            .ok_or_else(|| Error::invalid("case", format!("unknown baseline `{s}`")))
    }
}

/// Decision of one baseline on `input`.
pub fn solve_case(input: &BalancerInput, case: BaselineCase) -> Result<Decision> {
    input.validate()?;
    Ok(match case {
        BaselineCase::NoMutingLicensed => {
            Decision::unchecked(unlicensed_with_licensed(input)?, 1.0)
        }
        BaselineCase::NoMutingUnlicensed => Decision::unchecked(EPS, licensed_share(input, EPS)?),
        BaselineCase::NoTxLicensed => Decision::unchecked(unlicensed_only(input)?, 0.0),
        BaselineCase::NoTxUnlicensed => Decision::unchecked(1.0, licensed_share(input, 1.0)?),
        BaselineCase::IndependentMuting => {
            Decision::unchecked(unlicensed_only(input)?, licensed_share(input, 1.0)?)
        }
    })
}

fn wifi_terms(input: &BalancerInput) -> impl Iterator<Item = PfTerm> + '_ {
    input
        .rates
        .s_w_hat
        .iter()
        .map(|&s| PfTerm::new(1.0, 0.0, s))
}

fn mue_terms(input: &BalancerInput) -> impl Iterator<Item = PfTerm> + '_ {
    let r = &input.rates;
    r.s_m_noabs
        .iter()
        .zip(&r.s_m_abs)
        .map(|(&a, &b)| PfTerm::new(1.0, b, a - b))
}

/// `alpha` with `beta = 1`: SUEs see `l + (1 - alpha) u`.
fn unlicensed_with_licensed(input: &BalancerInput) -> Result<f64> {
    let r = &input.rates;
    let terms: Vec<PfTerm> = r
        .s_f_l
        .iter()
        .zip(&r.s_f_u)
        .map(|(&l, &u)| PfTerm::new(1.0, l + u, -u))
        .chain(wifi_terms(input))
        .collect();
    solve_pf_1d(&terms, EPS, input.r_bar_w)
}

/// `alpha` for the unlicensed channel alone: SUEs see `(1 - alpha) u`.
fn unlicensed_only(input: &BalancerInput) -> Result<f64> {
    let terms: Vec<PfTerm> = input
        .rates
        .s_f_u
        .iter()
        .map(|&u| PfTerm::new(1.0, u, -u))
        .chain(wifi_terms(input))
        .collect();
    solve_pf_1d(&terms, EPS, input.r_bar_w)
}

/// `beta` for a fixed `alpha`: SUEs see `beta l + (1 - alpha) u`.
fn licensed_share(input: &BalancerInput, alpha: f64) -> Result<f64> {
    let r = &input.rates;
    let terms: Vec<PfTerm> = mue_terms(input)
        .chain(
            r.s_f_l
                .iter()
                .zip(&r.s_f_u)
                .map(|(&l, &u)| PfTerm::new(1.0, (1.0 - alpha) * u, l)),
        )
        .collect();
    solve_pf_1d(&terms, 0.0, 1.0)
}

//! The six active-set combinations and their stationarity systems.
//!
//! Multipliers follow the maximization form of the Lagrangian, so every
//! designated multiplier must come out nonnegative:
//!
//! ```text
//! dU/dalpha = l1 + l2        dU/dbeta = l6 - l2
//! ```
//!
//! (bound multipliers `l3`, `l4`, `l5` are zero in every candidate). Solving
//! `dU/dbeta = 0` directly is equivalent to the negated form obtained from a
//! Lagrangian built on `-U`.

use super::{gradient, utility_log, BalancerInput, Decision, KktCertificate, KKT_TOL};
use crate::error::{Error, Result};
use crate::roots::{bisect, Bracket, EPS};

pub const CANDIDATES: [u8; 6] = [1, 2, 3, 4, 5, 6];

/// Indices (0-based) of the multipliers each candidate may set nonzero.
fn designated(k: u8) -> &'static [usize] {
    match k {
        1 => &[0, 5],
        2 => &[5],
        3 => &[0, 1],
        4 => &[0],
        5 => &[1],
        _ => &[],
    }
}

/// Stationary point and multipliers of candidate `k`.
///
/// When the candidate's equation has no root in the unit interval the
/// returned certificate has `stationary == false` and the decision is the
/// nearest bracket end; this is a verdict, not an error.
pub fn solve_candidate(input: &BalancerInput, k: u8) -> Result<(Decision, KktCertificate)> {
    if !(1..=6).contains(&k) {
        return Err(Error::invalid("candidate", format!("{k} not in 1..=6")));
    }
    input.validate()?;
    let rates = &input.rates;
    let r = input.r_bar_w;
    let g = |a: f64, b: f64| gradient(rates, a, b);
    let mut lambdas = [0.0; 6];

    let (alpha, beta, stationary) = match k {
        1 => {
            let gr = g(r, 1.0);
            lambdas[0] = gr.d_alpha;
            lambdas[5] = gr.d_beta;
            (r, 1.0, true)
        }
        2 => {
            let (alpha, ok) = root_or_end(bisect(|a| g(a, 1.0).d_alpha, EPS, 1.0), EPS, 1.0);
            lambdas[5] = g(alpha, 1.0).d_beta;
            (alpha, 1.0, ok)
        }
        3 => {
            let gr = g(r, r);
            lambdas[1] = -gr.d_beta;
            lambdas[0] = gr.d_alpha - lambdas[1];
            (r, r, true)
        }
        4 => {
            let (beta, ok) = root_or_end(bisect(|b| g(r, b).d_beta, 0.0, 1.0), 0.0, 1.0);
            lambdas[0] = g(r, beta).d_alpha;
            (r, beta, ok)
        }
        5 => {
            let along_diagonal = |x: f64| {
                let gr = g(x, x);
                gr.d_alpha + gr.d_beta
            };
            let (x, ok) = root_or_end(bisect(along_diagonal, EPS, 1.0), EPS, 1.0);
            lambdas[1] = g(x, x).d_alpha;
            (x, x, ok)
        }
        _ => interior(input),
    };

    let d = Decision::unchecked(alpha, beta);
    let utility = utility_log(rates, d).unwrap_or(f64::NEG_INFINITY);
    let mut cert = KktCertificate {
        candidate: k,
        lambdas,
        stationary,
        primal_ok: false,
        dual_ok: false,
        utility,
    };
    let (primal_ok, dual_ok) = check_kkt(input, &cert, d);
    cert.primal_ok = primal_ok && stationary;
    cert.dual_ok = dual_ok && stationary;
    Ok((d, cert))
}

/// Candidate 6: both stationarity equations hold with no constraint active.
///
/// For each trial `alpha` the inner bisection maximizes over `beta` in
/// `[0, 1]`; the value function is concave in `alpha` and its derivative is
/// `dU/dalpha` at the inner maximizer, so the outer equation is monotone too.
fn interior(input: &BalancerInput) -> (f64, f64, bool) {
    let rates = &input.rates;
    let inner = |a: f64| match bisect(|b| gradient(rates, a, b).d_beta, 0.0, 1.0) {
        Bracket::Root(b) => (b, true),
        Bracket::AllPositive => (1.0, false),
        Bracket::AllNegative => (0.0, false),
    };
    let outer = |a: f64| gradient(rates, a, inner(a).0).d_alpha;
    let (alpha, ok) = root_or_end(bisect(outer, EPS, 1.0), EPS, 1.0);
    let (beta, interior_beta) = inner(alpha);
    (alpha, beta, ok && interior_beta)
}

fn root_or_end(b: Bracket, lo: f64, hi: f64) -> (f64, bool) {
    match b {
        Bracket::Root(x) => (x, true),
        Bracket::AllPositive => (hi, false),
        Bracket::AllNegative => (lo, false),
    }
}

/// Primal and dual feasibility of `d` with the multipliers in `cert`.
///
/// Primal: unit-interval bounds, `alpha >= EPS`, `alpha <= r_bar_w` and
/// `alpha <= beta`, all within [`KKT_TOL`], and a finite utility. Dual: every
/// designated multiplier is at least `-KKT_TOL` (relative to the gradient's
/// magnitude) and every other one is exactly zero.
pub fn check_kkt(input: &BalancerInput, cert: &KktCertificate, d: Decision) -> (bool, bool) {
    let primal = d.is_feasible(input.r_bar_w, KKT_TOL)
        && utility_log(&input.rates, d).is_ok_and(f64::is_finite);

    let allowed = designated(cert.candidate);
    let scale = if primal {
        gradient(&input.rates, d.alpha, d.beta).scale
    } else {
        0.0
    };
    let tol = KKT_TOL * (1.0 + scale);
    let dual = cert.lambdas.iter().enumerate().all(|(i, &l)| {
        if allowed.contains(&i) {
            l >= -tol
        } else {
            l == 0.0
        }
    });
    (primal, dual)
}

//! Exhaustive grid search over the feasible region, used to cross-check the
//! candidate solver.

use rayon::prelude::*;

use super::{BalancerInput, Decision};
use crate::error::{Error, Result};

/// Argmax of the utility over `alpha in {h, 2h, ..} ∪ {r_bar_w}` and
/// `beta in {0, h, .., 1} ∪ {alpha}` with `alpha <= min(beta, r_bar_w)`.
///
/// Ties go to the larger `alpha`, then the larger `beta`. Grid points where the
/// utility is undefined are skipped.
pub fn grid_oracle(input: &BalancerInput, resolution: f64) -> Result<Decision> {
    if !(resolution > 0.0 && resolution <= 0.1) {
        return Err(Error::invalid(
            "resolution",
            format!("{resolution} not in (0, 0.1]"),
        ));
    }
    input.validate()?;
    let r = &input.rates;
    let r_max = input.r_bar_w.min(1.0);

    let steps = (1.0 / resolution).round() as usize;
    let grid = |i: usize| (i as f64 * resolution).min(1.0);
    let mut alphas: Vec<f64> = (1..=steps).map(grid).filter(|&a| a <= r_max).collect();
    if alphas.last().is_none_or(|&a| a < r_max) {
        alphas.push(r_max);
    }
    let betas: Vec<f64> = (0..=steps).map(grid).collect();

    // The MUE sum depends on beta alone.
    let mue_term = |b: f64| -> f64 {
        r.s_m_noabs
            .iter()
            .zip(&r.s_m_abs)
            .map(|(&a, &ab)| (b * a + (1.0 - b) * ab).ln())
            .sum()
    };
    let mue_on_grid: Vec<f64> = betas.iter().map(|&b| mue_term(b)).collect();
    let n_w = r.n_sta() as f64;
    let sta_const: f64 = r.s_w_hat.iter().map(|s| s.ln()).sum();

    let value = |a: f64, b: f64, mue: f64| -> f64 {
        let mut u = mue + n_w * a.ln() + sta_const;
        for (&l, &su) in r.s_f_l.iter().zip(&r.s_f_u) {
            u += (b * l + (1.0 - a) * su).ln();
        }
        if u.is_nan() {
            f64::NEG_INFINITY
        } else {
            u
        }
    };

    // Best point of each alpha row, scanned in ascending beta with `>=` so the
    // larger beta wins ties.
    let rows: Vec<(f64, f64, f64)> = alphas
        .par_iter()
        .map(|&a| {
            let mut best = (f64::NEG_INFINITY, a, f64::NAN);
            let mut consider = |b: f64, mue: f64| {
                let u = value(a, b, mue);
                if u > f64::NEG_INFINITY && u >= best.0 {
                    best = (u, a, b);
                }
            };
            let mut diagonal_done = false;
            for (&b, &mue) in betas.iter().zip(&mue_on_grid) {
                if !diagonal_done && b >= a {
                    if b > a {
                        consider(a, mue_term(a));
                    }
                    diagonal_done = true;
                }
                if b >= a {
                    consider(b, mue);
                }
            }
            best
        })
        .collect();

    let mut best: Option<(f64, f64, f64)> = None;
    for row in rows {
        if row.0 == f64::NEG_INFINITY {
            continue;
        }
        if best.is_none_or(|b| row.0 >= b.0) {
            best = Some(row);
        }
    }
    best.map(|(_, a, b)| Decision::unchecked(a, b))
        .ok_or_else(|| Error::EmptyFeasibleSet("utility undefined on every grid point".into()))
}

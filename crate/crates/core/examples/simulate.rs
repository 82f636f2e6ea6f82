//! Slot-level simulation under the holistic policy, with load and
//! population estimated online from what the SBS hears while muted.
//!
//! Pass a run count to trade precision for time (default 50).

use laa_balancer::metrics::mean_ci;
use laa_balancer::scenario::{Axis, Scenario};
use laa_balancer::sim::simulate_runs;
use laa_balancer::Result;

fn main() -> Result<()> {
    let runs: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(50);
    let base = Scenario::load(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/scenarios/poisson_equal_counts.toml"
    ))?;

    println!("lambda_wlan  lambda_mue   1-alpha (95% CI)    beta    laa airtime  jain");
    for (l_w, l_m) in [(1.0, 0.5), (1.5, 0.5), (1.5, 2.0)] {
        let s = base
            .with_axis(Axis::LambdaWlan, l_w)?
            .with_axis(Axis::LambdaMue, l_m)?;
        let mut config = s.sim_config(false)?;
        config.n_runs = runs;
        let results = simulate_runs(&config, s.policy()?)?;

        let col = |f: &dyn Fn(&laa_balancer::sim::RunResult) -> f64| {
            results.iter().map(f).collect::<Vec<_>>()
        };
        let (unl, unl_ci) = mean_ci(&col(&|r| 1.0 - r.mean_decision.alpha), 0.95)?;
        let (beta, _) = mean_ci(&col(&|r| r.mean_decision.beta), 0.95)?;
        let (air, _) = mean_ci(&col(&|r| r.laa_airtime), 0.95)?;
        let (jain, _) = mean_ci(&col(&|r| r.report.jain), 0.95)?;
        println!(
            "{l_w:>11.1}  {l_m:>10.1}   {unl:.3} (+/- {unl_ci:.3})   {beta:.3}   {air:.3}        {jain:.3}"
        );
    }
    Ok(())
}

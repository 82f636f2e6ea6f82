//! Jain's fairness index of the holistic scheme next to the five baselines.

use laa_balancer::experiments::{check_order, cmd_compare, Options, DEFAULT_ORDER};
use laa_balancer::scenario::Scenario;
use laa_balancer::Result;

fn main() -> Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/fairness.toml").into());
    let rows = cmd_compare(&Scenario::load(&path)?, &Options::default())?;

    println!("scheme     alpha   beta    jain    total (Mbps)");
    for (name, r) in &rows {
        println!(
            "{name:<9}  {:.3}   {:.3}   {:.3}   {:.2}",
            r.alpha,
            r.beta,
            r.jain,
            r.total / 1e6
        );
    }
    match check_order(&rows, DEFAULT_ORDER) {
        Ok(()) => println!("ordering {DEFAULT_ORDER} holds"),
        Err(e) => println!("{e}"),
    }
    Ok(())
}

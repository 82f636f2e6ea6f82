//! Unlicensed airtime of the SBS as MBS-to-SUE interference grows, for the
//! three node mixes.

use laa_balancer::experiments::{cmd_sweep, sweep_points, Options};
use laa_balancer::scenario::{Axis, Scenario};
use laa_balancer::Result;

fn main() -> Result<()> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios");
    let points = sweep_points(-95.0, -60.0, 8)?;
    for (file, loads) in [
        ("sweep_single", [0.5, 0.9]),
        ("sweep_wifi_heavy", [0.5, 0.9]),
        ("sweep_lte_heavy", [0.5, 0.9]),
    ] {
        let base = Scenario::load(format!("{dir}/{file}.toml"))?;
        for r in loads {
            let s = base.with_axis(Axis::RBarW, r)?;
            let rows = cmd_sweep(&s, Axis::InterferenceMbsSue, &points, &Options::default())?;
            println!("{file}, R_w = {r}");
            println!("  I (dBm)   1-alpha   beta");
            for p in rows {
                match p.outcome {
                    Ok(row) => println!(
                        "  {:>7.1}   {:.3}     {:.3}",
                        p.value,
                        1.0 - row.alpha,
                        row.beta
                    ),
                    Err(e) => println!("  {:>7.1}   {e}", p.value),
                }
            }
        }
    }
    Ok(())
}

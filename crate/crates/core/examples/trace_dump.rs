//! One simulated run written out as a channel-state trace
//! (`t_us,state,node_id,bits`), followed by an airtime breakdown.

use std::io::Write;

use laa_balancer::scenario::Scenario;
use laa_balancer::sim::{run_simulation, ChannelState};
use laa_balancer::Result;

fn main() -> Result<()> {
    let s = Scenario::load(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/scenarios/poisson_equal_counts.toml"
    ))?;
    let mut config = s.sim_config(false)?;
    config.record_segments = true;
    config.run_length = 0.06;
    let run = run_simulation(&config, s.policy()?, 0)?;

    let out = std::env::temp_dir().join("laa_trace.csv");
    run.trace
        .write_dump(std::io::BufWriter::new(std::fs::File::create(&out)?))?;
    println!(
        "{} segments written to {}",
        run.trace.segments.len(),
        out.display()
    );

    let total = run.trace.end as f64;
    let mut stdout = std::io::stdout().lock();
    for state in ChannelState::ALL {
        writeln!(
            stdout,
            "{state:<16} {:.3}",
            run.trace.airtime_of(state) as f64 / total
        )?;
    }
    for e in &run.trace.epochs {
        writeln!(
            stdout,
            "epoch at {:>6.1} ms: muted {:>2} subframes, LAA from {:>8}, heard {} STAs",
            e.start as f64 / 1e6,
            e.muted_subframes,
            e.laa_start
                .map_or("-".into(), |t| format!("{:.3} ms", t as f64 / 1e6)),
            e.senders.len()
        )?;
    }
    Ok(())
}

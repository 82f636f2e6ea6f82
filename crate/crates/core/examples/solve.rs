//! Optimal licensed/unlicensed split for one scenario.
//!
//! ```text
//! cargo run --example solve -- scenarios/fairness.toml
//! ```

use laa_balancer::balancer::{grid_oracle, solve_candidate, utility_log, CANDIDATES};
use laa_balancer::scenario::Scenario;
use laa_balancer::{solve_holistic, Result};

fn main() -> Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/sweep_single.toml").into()
    });
    let scenario = Scenario::load(&path)?;
    let input = scenario.balancer_input(false)?;

    let (d, cert) = solve_holistic(&input)?;
    println!(
        "{}: alpha = {:.4}, beta = {:.4}",
        scenario.name, d.alpha, d.beta
    );
    println!("SBS unlicensed share 1 - alpha = {:.4}", 1.0 - d.alpha);
    println!(
        "certificate: candidate {} lambdas {:?}",
        cert.candidate, cert.lambdas
    );

    // Every candidate point, feasible or not.
    for k in CANDIDATES {
        match solve_candidate(&input, k) {
            Ok((c, cert)) => println!(
                "  candidate {k}: ({:.4}, {:.4}) U = {:.4} feasible = {}",
                c.alpha,
                c.beta,
                cert.utility,
                cert.feasible()
            ),
            Err(e) => println!("  candidate {k}: {e}"),
        }
    }

    let g = grid_oracle(&input, 1e-3)?;
    println!(
        "grid search: ({:.3}, {:.3}) U = {:.4}",
        g.alpha,
        g.beta,
        utility_log(&input.rates, g)?
    );
    Ok(())
}

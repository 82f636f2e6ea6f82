//! Link budgets from node distances instead of received levels.

use laa_balancer::scenario::Scenario;
use laa_balancer::{solve_holistic, BalancerInput, Result};

const SCENARIO: &str = r#"
name = "distances"
r_bar_w = 0.6

[counts]
n_mue = 2
n_sue = 2
n_sta = 4

[radio]
noise_dbm = -95.0

[radio.geometry]
mue_to_mbs_m = [250.0, 400.0]
mue_to_sbs_m = [60.0, 35.0]
sue_to_sbs_m = [10.0, 25.0]
sue_to_mbs_m = 300.0
sue_indoor = true

[lte]
mac_cap = true
"#;

fn main() -> Result<()> {
    let s = Scenario::from_toml(SCENARIO)?;
    let rates = s.rates(false)?;
    for (i, (noabs, abs)) in rates.s_m_noabs.iter().zip(&rates.s_m_abs).enumerate() {
        println!(
            "MUE {i}: {:.2} Mbps, {:.2} Mbps in blank subframes",
            noabs / 1e6,
            abs / 1e6
        );
    }
    for (i, (l, u)) in rates.s_f_l.iter().zip(&rates.s_f_u).enumerate() {
        println!(
            "SUE {i}: licensed {:.2} Mbps, unlicensed {:.2} Mbps",
            l / 1e6,
            u / 1e6
        );
    }
    let (d, _) = solve_holistic(&BalancerInput::new(rates, s.r_bar_w.unwrap_or(1.0)))?;
    println!("alpha = {:.3}, beta = {:.3}", d.alpha, d.beta);
    Ok(())
}

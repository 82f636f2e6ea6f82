//! Saturated DCF throughput from the fixed-point model, checked against a
//! slot-by-slot contention run.

use laa_balancer::rate_model::{
    bianchi_tau, wifi_exclusive_throughput, wifi_slot_probabilities, WifiMacParams,
};
use laa_balancer::sim::{wifi_dcf_step, DcfState, SlotOutcome, Traffic};
use laa_balancer::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    println!("  n   tau      P_s     S/STA (Mbps)  sim P_s");
    for n in [1, 2, 5, 10, 20] {
        let params = WifiMacParams::standard(n);
        let tau = bianchi_tau(params.cw_min, params.retry_stages, n)?;
        let p = wifi_slot_probabilities(&params)?;
        let s = wifi_exclusive_throughput(&params, 0)?;

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut dcf = DcfState::new(
            n,
            params.cw_min,
            params.retry_stages,
            Traffic::Saturated,
            &mut rng,
        );
        let slots = 200_000;
        let wins = (0..slots)
            .filter(|_| {
                matches!(
                    wifi_dcf_step(&mut dcf, 0, &mut rng),
                    SlotOutcome::Success(_)
                )
            })
            .count();
        println!(
            "{n:>3}   {tau:.4}   {:.4}  {:>8.3}      {:.4}",
            p.p_succ.iter().sum::<f64>(),
            s / 1e6,
            wins as f64 / slots as f64
        );
    }
    Ok(())
}

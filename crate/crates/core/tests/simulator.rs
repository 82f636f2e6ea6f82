mod common;

use laa_balancer::balancer::{Decision, EPS};
use laa_balancer::rate_model::{
    dbm_to_watts, wifi_slot_probabilities, RadioEnvironment, WifiMacParams,
};
use laa_balancer::sim::{
    count_active_stas, estimate_wlan_load, run_simulation, secs_to_ns, ChannelState, Policy,
    SimConfig, SimTrace,
};
use proptest::prelude::*;

fn env(n_mue: usize, n_sue: usize) -> RadioEnvironment {
    RadioEnvironment {
        p_sbs_sue: vec![dbm_to_watts(-70.0); n_sue],
        p_mbs_mue: vec![dbm_to_watts(-78.0); n_mue],
        i_mbs_sue: vec![dbm_to_watts(-70.0); n_sue],
        i_sbs_mue: vec![dbm_to_watts(-85.0); n_mue],
        i_wlan_sue: vec![0.0; n_sue],
        noise: dbm_to_watts(-95.0),
        licensed_bw: 20e6,
        unlicensed_bw: 20e6,
    }
}

fn config(n_sta: usize, run_length: f64) -> SimConfig {
    let mut c = SimConfig::new(env(2, 2), WifiMacParams::standard(n_sta));
    c.run_length = run_length;
    c.n_runs = 1;
    c.record_segments = true;
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mechanism_invariants_hold(
        seed in any::<u64>(),
        n_sta in 1usize..6,
        lambda in prop::option::of(10.0f64..2000.0),
        alpha in 0.0f64..1.0,
        holistic in any::<bool>(),
    ) {
        let mut c = config(n_sta, 0.2);
        c.seed = seed;
        c.lambda_wlan = lambda;
        let policy = if holistic {
            Policy::Holistic
        } else {
            Policy::Fixed(Decision::new(alpha.max(EPS), 1.0).unwrap())
        };
        let run = run_simulation(&c, policy, 0).unwrap();
        let checked = common::check_mechanism(&run.trace, secs_to_ns(c.epoch), secs_to_ns(c.max_occupancy));
        prop_assert!(checked.is_ok(), "{:?}", checked);
        prop_assert!(run.throughputs.all().iter().all(|&s| s >= 0.0));

        let again = run_simulation(&c, policy, 0).unwrap();
        prop_assert_eq!(again.trace, run.trace);
    }
}

#[test]
fn runs_use_distinct_streams() {
    let c = config(3, 0.1);
    let a = run_simulation(&c, Policy::Holistic, 0).unwrap();
    let b = run_simulation(&c, Policy::Holistic, 1).unwrap();
    assert_ne!(a.trace.frames, b.trace.frames);
}

#[test]
fn fixed_policy_airtime_converges() {
    // 120 epochs of saturated contention.
    let c = config(5, 2.4);
    let run = run_simulation(&c, Policy::Fixed(Decision::new(0.5, 1.0).unwrap()), 0).unwrap();
    let t = &run.trace;
    let share = |s: ChannelState| t.airtime_of(s) as f64 / t.end as f64;
    let wifi = share(ChannelState::WifiSuccess) + share(ChannelState::WifiCollision);
    let laa = share(ChannelState::LaaTx);
    let overhead =
        share(ChannelState::LaaSensing) + share(ChannelState::Cts) + share(ChannelState::Idle);
    assert!((wifi + laa + overhead - 1.0).abs() < 1e-12);
    assert!((laa - 0.5).abs() <= 0.03, "LAA airtime {laa}");
    // Idle backoff slots belong to the WLAN's share of the channel.
    let wlan = wifi + share(ChannelState::Idle);
    assert!((wlan - 0.5).abs() <= 0.03, "WLAN share {wlan}");
}

#[test]
fn silent_wlan_leaves_the_channel_to_the_sbs() {
    let mut c = config(3, 0.2);
    c.lambda_wlan = Some(0.0);
    let run = run_simulation(&c, Policy::Fixed(Decision::new(EPS, 1.0).unwrap()), 0).unwrap();
    let t = &run.trace;
    assert!(t.frames.is_empty());
    let epoch = secs_to_ns(c.epoch);
    let subframe = secs_to_ns(c.subframe);
    for e in &t.epochs {
        let tx: u64 = t
            .laa_bursts
            .iter()
            .map(|&(a, b)| common::overlap(a, b, e.start, e.start + epoch))
            .sum();
        assert!(tx + subframe >= epoch, "epoch at {}: {tx} ns", e.start);
    }
}

#[test]
fn silent_wlan_is_heard_as_idle() {
    let mut c = config(3, 0.2);
    c.lambda_wlan = Some(0.0);
    let run = run_simulation(&c, Policy::Fixed(Decision::new(0.5, 1.0).unwrap()), 0).unwrap();
    assert_eq!(count_active_stas(&run.trace, 3), 0);
    let (load, floored) = estimate_wlan_load(&run.trace, 3).unwrap();
    assert!(floored && load == EPS);
}

#[test]
fn saturated_wlan_load_matches_busy_share() {
    let c = config(5, 2.0);
    let run = run_simulation(&c, Policy::Fixed(Decision::new(0.5, 1.0).unwrap()), 0).unwrap();
    let (load, floored) = estimate_wlan_load(&run.trace, 100).unwrap();
    assert!(!floored);
    // Share of time a saturated DCF channel is busy, from the slot probabilities.
    let p = wifi_slot_probabilities(&c.wifi).unwrap();
    let busy = p.p_busy * c.wifi.busy_slot;
    let expected = busy / (busy + p.p_idle * c.wifi.idle_slot);
    assert!((load - expected).abs() < 0.02, "{load} vs {expected}");
    assert_eq!(count_active_stas(&run.trace, 3), 5);
}

#[test]
fn three_busy_stations_are_all_counted() {
    let c = config(3, 0.1);
    let run = run_simulation(&c, Policy::Fixed(Decision::new(0.5, 1.0).unwrap()), 0).unwrap();
    assert_eq!(count_active_stas(&run.trace, 3), 3);
}

#[test]
fn sparse_stations_are_undercounted_not_overcounted() {
    let mut c = config(5, 0.1);
    c.lambda_wlan = Some(5.0);
    let mut seen_fewer = false;
    for seed in 0..20 {
        c.seed = seed;
        let run = run_simulation(&c, Policy::Fixed(Decision::new(0.3, 1.0).unwrap()), 0).unwrap();
        let n = count_active_stas(&run.trace, 1);
        assert!(n <= 5);
        seen_fewer |= n < 5;
    }
    assert!(seen_fewer);
}

#[test]
fn estimator_needs_observation() {
    assert!(estimate_wlan_load(&SimTrace::default(), 3).is_err());
}

mod common;

use laa_balancer::balancer::{
    grid_oracle, solve_candidate, utility_log, BalancerInput, CANDIDATES, EPS,
};
use laa_balancer::solve_holistic;
use proptest::prelude::*;

/// Stationarity residual of the utility in alpha along beta = 1.
fn alpha_residual(input: &BalancerInput, a: f64) -> f64 {
    let r = &input.rates;
    let sue: f64 = r
        .s_f_l
        .iter()
        .zip(&r.s_f_u)
        .map(|(l, u)| u / (l + (1.0 - a) * u))
        .sum();
    sue - r.n_sta() as f64 / a
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn decisions_are_feasible(input in common::instance()) {
        let (d, cert) = solve_holistic(&input).unwrap();
        prop_assert!(d.alpha >= EPS && d.alpha <= 1.0);
        prop_assert!((0.0..=1.0).contains(&d.beta));
        prop_assert!(d.alpha <= d.beta);
        prop_assert!(d.alpha <= input.r_bar_w);
        prop_assert!(1.0 - d.alpha >= 1.0 - input.r_bar_w);
        prop_assert!(cert.feasible());
    }

    #[test]
    fn never_worse_than_a_coarse_grid(input in common::instance()) {
        let (d, _) = solve_holistic(&input).unwrap();
        let g = grid_oracle(&input, 0.01).unwrap();
        let u = utility_log(&input.rates, d).unwrap();
        prop_assert!(u >= utility_log(&input.rates, g).unwrap() - 1e-6);
    }

    #[test]
    fn argmax_ignores_rate_scale(input in common::instance(), c in 1e-3f64..1e3) {
        let (d, _) = solve_holistic(&input).unwrap();
        let scaled = BalancerInput::new(input.rates.scaled(c), input.r_bar_w);
        let (e, _) = solve_holistic(&scaled).unwrap();
        prop_assert!((d.alpha - e.alpha).abs() < 1e-6 && (d.beta - e.beta).abs() < 1e-6, "{d:?} vs {e:?}");
    }

    #[test]
    fn worse_licensed_links_push_traffic_unlicensed(input in common::instance()) {
        let mut last = f64::NEG_INFINITY;
        for factor in [1.0, 0.5, 0.2, 0.1, 0.05, 0.01] {
            let mut rates = input.rates.clone();
            rates.s_f_l.iter_mut().for_each(|l| *l *= factor);
            let (d, _) = solve_holistic(&BalancerInput::new(rates, input.r_bar_w)).unwrap();
            prop_assert!(1.0 - d.alpha >= last - 1e-7, "factor {factor}: {} < {last}", 1.0 - d.alpha);
            last = 1.0 - d.alpha;
        }
    }

    #[test]
    fn alpha_residual_has_one_crossing(input in common::instance()) {
        let grid: Vec<f64> = (1..=2000).map(|i| i as f64 / 2000.0).collect();
        let res: Vec<f64> = grid.iter().map(|&a| alpha_residual(&input, a)).collect();
        prop_assert!(res.windows(2).all(|w| w[1] > w[0]));
        let crossings = res.windows(2).filter(|w| (w[0] < 0.0) != (w[1] < 0.0)).count();
        prop_assert!(crossings <= 1);
    }

    #[test]
    fn feasible_candidates_agree(input in common::instance()) {
        let (d, cert) = solve_holistic(&input).unwrap();
        for k in CANDIDATES {
            if let Ok((c, ck)) = solve_candidate(&input, k) {
                if ck.feasible() {
                    prop_assert!((c.alpha - d.alpha).abs() < 1e-6 && (c.beta - d.beta).abs() < 1e-6,
                        "candidate {k} {c:?} vs chosen {} {d:?}", cert.candidate);
                }
            }
        }
    }
}

#[test]
fn single_sue_single_sta_full_load() {
    // One node of each kind with equal SUE rates and no MUE gain from blanking:
    // alpha pins to the load and beta to one.
    let input = BalancerInput::new(
        laa_balancer::RatePrimitives {
            s_m_noabs: vec![5.0],
            s_m_abs: vec![5.0],
            s_f_l: vec![3.0],
            s_f_u: vec![3.0],
            s_w_hat: vec![7.0],
        },
        1.0,
    );
    let (d, _) = solve_holistic(&input).unwrap();
    assert!((d.alpha - 1.0).abs() < 1e-9 && (d.beta - 1.0).abs() < 1e-9);
}

mod common;

use laa_balancer::balancer::{utility_log, EPS};
use laa_balancer::baselines::{solve_case, BaselineCase};
use laa_balancer::metrics::{efficiency, jain_index, MetricsReport};
use laa_balancer::rate_model::epoch_throughputs;
use laa_balancer::solve_holistic;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cases_keep_their_fixed_components(input in common::instance()) {
        let d = |c| solve_case(&input, c).unwrap();
        prop_assert_eq!(d(BaselineCase::NoMutingLicensed).beta, 1.0);
        prop_assert_eq!(d(BaselineCase::NoMutingUnlicensed).alpha, EPS);
        prop_assert_eq!(d(BaselineCase::NoTxLicensed).beta, 0.0);
        prop_assert_eq!(d(BaselineCase::NoTxUnlicensed).alpha, 1.0);
        for c in BaselineCase::ALL {
            let x = d(c);
            prop_assert!((0.0..=1.0).contains(&x.alpha) && (0.0..=1.0).contains(&x.beta));
        }
    }

    #[test]
    fn holistic_dominates_feasible_cases(input in common::instance()) {
        let (h, _) = solve_holistic(&input).unwrap();
        let u = utility_log(&input.rates, h).unwrap();
        for c in BaselineCase::ALL {
            let d = solve_case(&input, c).unwrap();
            if d.is_feasible(input.r_bar_w, 1e-12) {
                let uc = utility_log(&input.rates, d).unwrap();
                prop_assert!(u >= uc - 1e-6 * (1.0 + u.abs()), "{c}: {uc} > {u}");
            }
        }
    }

    #[test]
    fn case2_starves_the_wlan(input in common::instance()) {
        let d = solve_case(&input, BaselineCase::NoMutingUnlicensed).unwrap();
        let t = epoch_throughputs(&input.rates, d).unwrap();
        prop_assert_eq!(MetricsReport::from_throughputs(&t).unwrap().wlan, 0.0);
    }

    #[test]
    fn jain_is_scale_free_and_bounded(s in prop::collection::vec(0.0f64..1e8, 1..40), c in 1e-6f64..1e6) {
        prop_assume!(s.iter().any(|&x| x > 0.0));
        let j = jain_index(&s).unwrap();
        let scaled: Vec<f64> = s.iter().map(|x| x * c).collect();
        prop_assert!((jain_index(&scaled).unwrap() - j).abs() < 1e-9);
        let n = s.len() as f64;
        prop_assert!(j >= 1.0 / n - 1e-12 && j <= 1.0 + 1e-12);
    }

    #[test]
    fn efficiency_adds_over_partitions(s in prop::collection::vec(0.0f64..1e8, 0..40), cut in 0usize..40) {
        let cut = cut.min(s.len());
        let (a, b) = s.split_at(cut);
        let whole = efficiency(&s);
        prop_assert!((efficiency(a) + efficiency(b) - whole).abs() <= 1e-9 * (1.0 + whole));
    }
}

#[test]
fn jain_extremes() {
    assert_eq!(jain_index(&[4.0, 4.0, 4.0]).unwrap(), 1.0);
    assert!((jain_index(&[1.0, 0.0, 0.0, 0.0]).unwrap() - 0.25).abs() < 1e-15);
    assert!(jain_index(&[0.0, 0.0]).is_err());
}

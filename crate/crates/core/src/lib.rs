//! Holistic licensed/unlicensed traffic balancing for an LTE-LAA small cell.
//!
//! The small cell (SBS) shares a licensed carrier with a macro cell (MBS) via
//! almost-blank subframes, and an unlicensed channel with a WLAN via duty-cycle
//! muting. Each epoch it picks two fractions:
//!
//! * `alpha`: share of the epoch it stays muted on the unlicensed channel;
//! * `beta`: share of the epoch it transmits on the licensed carrier.
//!
//! [`balancer::solve_holistic`] picks them to maximize the sum of
//! log-throughputs of every MUE, SUE and STA. [`baselines`] holds the five
//! single-band comparison schemes, [`sim`] a WiFi/LAA coexistence simulator
//! driven by any of those policies, and [`metrics`] the fairness and
//! efficiency measures. [`experiments`] ties them to scenario files.
//!
//! ```
//! use laa_balancer::balancer::{solve_holistic, BalancerInput};
//! use laa_balancer::rate_model::RatePrimitives;
//!
//! let rates = RatePrimitives {
//!     s_m_noabs: vec![20e6],
//!     s_m_abs: vec![30e6],
//!     s_f_l: vec![10e6],
//!     s_f_u: vec![60e6],
//!     s_w_hat: vec![34e6],
//! };
//! let (d, cert) = solve_holistic(&BalancerInput::new(rates, 0.8)).unwrap();
//! assert!(d.alpha <= d.beta && d.alpha <= 0.8);
//! assert!(cert.primal_ok && cert.dual_ok);
//! ```

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod balancer;
pub mod baselines;
pub mod error;
pub mod experiments;
pub mod metrics;
pub mod rate_model;
pub mod roots;
pub mod scenario;
pub mod sim;

pub use balancer::{solve_holistic, BalancerInput, Decision, KktCertificate};
pub use error::{Error, Result};
pub use rate_model::{RadioEnvironment, RatePrimitives, WifiMacParams};

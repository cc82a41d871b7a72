//! Detection performance of a Gaussian observer aided by a binary alerting
//! system.
//!
//! The crate covers single-detector signal detection theory ([`sdt`]), the
//! human + aid tandem ([`tandem`]): payoff-optimal contingent criteria,
//! maximal combined sensitivity, the α-corrected closed form and trust
//! miscalibration sweeps, and a seeded Monte Carlo oracle ([`sim`]) that
//! checks the closed forms by simulation.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`). The aliases at the
//! crate root fix the scalar to `f64`, which is what the stated precision
//! guarantees refer to.

// `!(x > y)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod gaussian;
pub mod optimize;
pub mod scalar;
pub mod sdt;
pub mod sim;
pub mod tandem;

pub use error::{Error, Result};
pub use gaussian::{std_normal_cdf, std_normal_pdf, std_normal_quantile, std_normal_quantile_of};
pub use scalar::Scalar;
pub use sdt::{
    criterion_from_ln_beta, dprime_from_rates, expected_payoff, ln_beta_at, ln_beta_from_rates, optimal_ln_beta,
    rates_at, roc_curve,
};
pub use sim::{compare_with_analytic, simulate, simulate_sequential, verify_against_analytic};
pub use tandem::{
    approx_d_eff, contingent_optimal_criteria, continuous_fusion_bound, d_eff_of, default_alpha_grid,
    default_trust_ratios, fit_alpha, log_spaced, make_aid, maximize_d_eff, optimal_shift, tandem_performance,
    tandem_rates, trust_scaled_criteria, trust_sweep,
};

pub type Probability = gaussian::Probability<f64>;
pub type DetectorParams = sdt::DetectorParams<f64>;
pub type PayoffContext = sdt::PayoffContext<f64>;
pub type OperatingPoint = sdt::OperatingPoint<f64>;
pub type AidCharacteristics = tandem::AidCharacteristics<f64>;
pub type ContingentCriteria = tandem::ContingentCriteria<f64>;
pub type TandemPerformance = tandem::TandemPerformance<f64>;
pub type TrustSweepPoint = tandem::TrustSweepPoint<f64>;
pub type AlphaFit = tandem::AlphaFit<f64>;
pub type AlphaFitPoint = tandem::AlphaFitPoint<f64>;
pub type AidOptimum = tandem::AidOptimum<f64>;
pub type SearchConfig = tandem::SearchConfig<f64>;
pub type SimConfig = sim::SimConfig<f64>;
pub type SimResult = sim::SimResult<f64>;
pub type VerificationReport = sim::VerificationReport<f64>;
pub type Verification = sim::Verification<f64>;

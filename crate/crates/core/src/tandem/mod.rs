//! A Gaussian observer working in tandem with a binary decision aid.
//!
//! The aid sees its own observation, independent of the human's given the
//! state of the world, and either alerts or stays silent. The human keeps one
//! log-likelihood-ratio criterion per aid output; the combined system is then
//! summarised by its operating point and the equivalent sensitivity `d'_eff`.

mod fusion;
mod maximize;
mod trust;

use serde::Serialize;

pub use fusion::{approx_d_eff, continuous_fusion_bound, default_alpha_grid, fit_alpha, AlphaFit, AlphaFitPoint};
pub use maximize::{maximize_d_eff, AidOptimum, SearchConfig};
pub use trust::{default_trust_ratios, log_spaced, trust_scaled_criteria, trust_sweep, TrustSweepPoint};

use crate::error::{require_finite, Error, Result};
use crate::gaussian::{phi, Probability};
use crate::scalar::Scalar;
use crate::sdt::{dprime_from_rates, expected_payoff, rates_at, DetectorParams, OperatingPoint, PayoffContext};

/// The binary aid: its sensitivity, cutoff and the alert probabilities under
/// each state that follow from them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AidCharacteristics<T> {
    pub dprime_a: T,
    pub criterion_a: T,
    /// P(A | S1)
    pub p_alert_given_s1: Probability<T>,
    /// P(A | S0)
    pub p_alert_given_s0: Probability<T>,
}

impl<T: Scalar> AidCharacteristics<T> {
    /// An aid with zero sensitivity carries no information about the state.
    pub fn is_informative(&self) -> bool {
        self.dprime_a > T::zero()
    }
}

pub fn make_aid<T: Scalar>(dprime_a: T, criterion_a: T) -> Result<AidCharacteristics<T>> {
    let op = rates_at(&DetectorParams::new(dprime_a, criterion_a)?);
    Ok(AidCharacteristics {
        dprime_a,
        criterion_a,
        p_alert_given_s1: op.p_tp,
        p_alert_given_s0: op.p_fp,
    })
}

/// The human's log-criteria after an alert and after no alert.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContingentCriteria<T> {
    pub ln_beta_alert: T,
    pub ln_beta_no_alert: T,
}

impl<T: Scalar> ContingentCriteria<T> {
    /// Same criterion on both branches: the aid is ignored.
    pub fn uniform(ln_beta: T) -> Self {
        Self {
            ln_beta_alert: ln_beta,
            ln_beta_no_alert: ln_beta,
        }
    }

    /// `Δ ln β = ln β_A − ln β_Ā`.
    pub fn shift(&self) -> T {
        self.ln_beta_alert - self.ln_beta_no_alert
    }

    /// Criteria on the observation axis, `(c_alert, c_no_alert)`, for a human
    /// with sensitivity `d_h`.
    pub fn on_axis(&self, d_h: T) -> Result<(T, T)> {
        Ok((
            crate::sdt::criterion_from_ln_beta(self.ln_beta_alert, d_h)?,
            crate::sdt::criterion_from_ln_beta(self.ln_beta_no_alert, d_h)?,
        ))
    }
}

/// Operating point, equivalent sensitivity and expected payoff of the tandem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TandemPerformance<T> {
    /// Combined rates after the clamping policy.
    pub operating_point: OperatingPoint<T>,
    pub d_eff: T,
    pub expected_payoff: T,
}

fn require_interior_aid<T: Scalar>(aid: &AidCharacteristics<T>) -> Result<()> {
    if aid.p_alert_given_s1.is_interior() && aid.p_alert_given_s0.is_interior() {
        Ok(())
    } else {
        Err(Error::DegenerateAid {
            p_alert_s1: aid.p_alert_given_s1.value().to_f64().unwrap_or(f64::NAN),
            p_alert_s0: aid.p_alert_given_s0.value().to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// Log-likelihood ratio of the aid's alert, `ln[P(A|S0) / P(A|S1)]`, and of
/// its silence, `ln[P(Ā|S0) / P(Ā|S1)]`.
fn cue_log_ratios<T: Scalar>(aid: &AidCharacteristics<T>) -> Result<(T, T)> {
    require_interior_aid(aid)?;
    let s1 = aid.p_alert_given_s1;
    let s0 = aid.p_alert_given_s0;
    Ok((
        s0.value().ln() - s1.value().ln(),
        s0.complement().ln() - s1.complement().ln(),
    ))
}

/// Payoff-optimal criteria conditioned on the aid's output.
///
/// Each branch is the unaided optimum `ln[U (1 − P(S1)) / P(S1)]` plus the log
/// ratio of the cue's probability under noise and under signal.
pub fn contingent_optimal_criteria<T: Scalar>(
    aid: &AidCharacteristics<T>,
    ctx: &PayoffContext<T>,
) -> Result<ContingentCriteria<T>> {
    let (alert, silent) = cue_log_ratios(aid)?;
    let base = crate::sdt::optimal_ln_beta(ctx);
    Ok(ContingentCriteria {
        ln_beta_alert: base + alert,
        ln_beta_no_alert: base + silent,
    })
}

/// Optimal `Δ ln β* = ln β*_A − ln β*_Ā`; depends on the aid alone.
pub fn optimal_shift<T: Scalar>(aid: &AidCharacteristics<T>) -> Result<T> {
    let (alert, silent) = cue_log_ratios(aid)?;
    Ok(alert - silent)
}

fn require_positive_dprime<T: Scalar>(d_h: T) -> Result<T> {
    if d_h > T::zero() && d_h.is_finite() {
        Ok(d_h)
    } else {
        Err(Error::DegenerateDetector(d_h.to_f64().unwrap_or(f64::NAN)))
    }
}

/// Combined hit and false-alarm rates, by total probability over the aid's
/// output.
pub fn tandem_rates<T: Scalar>(
    d_h: T,
    criteria: &ContingentCriteria<T>,
    aid: &AidCharacteristics<T>,
) -> Result<OperatingPoint<T>> {
    let d_h = require_positive_dprime(d_h)?;
    require_finite("ln_beta_alert", criteria.ln_beta_alert)?;
    require_finite("ln_beta_no_alert", criteria.ln_beta_no_alert)?;
    let c_alert = criteria.ln_beta_alert / d_h;
    let c_silent = criteria.ln_beta_no_alert / d_h;
    let half = d_h * T::half();
    Ok(OperatingPoint {
        p_tp: Probability::mix(aid.p_alert_given_s1, phi(half - c_alert), phi(half - c_silent)),
        p_fp: Probability::mix(aid.p_alert_given_s0, phi(-half - c_alert), phi(-half - c_silent)),
    })
}

/// Equivalent sensitivity of the tandem, with clamped rates.
pub fn d_eff_of<T: Scalar>(d_h: T, criteria: &ContingentCriteria<T>, aid: &AidCharacteristics<T>) -> Result<T> {
    dprime_from_rates(&tandem_rates(d_h, criteria, aid)?.clamped())
}

pub fn tandem_performance<T: Scalar>(
    d_h: T,
    criteria: &ContingentCriteria<T>,
    aid: &AidCharacteristics<T>,
    ctx: &PayoffContext<T>,
) -> Result<TandemPerformance<T>> {
    let raw = tandem_rates(d_h, criteria, aid)?;
    let operating_point = raw.clamped();
    Ok(TandemPerformance {
        operating_point,
        d_eff: dprime_from_rates(&operating_point)?,
        expected_payoff: expected_payoff(&raw, ctx),
    })
}

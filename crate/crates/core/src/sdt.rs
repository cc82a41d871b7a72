//! Single-detector signal detection theory for equal-variance Gaussians.
//!
//! Noise (S0) is centred at `-d'/2` and signal (S1) at `+d'/2`, both with unit
//! variance; the detector responds "signal" when the observation exceeds its
//! criterion.

use serde::Serialize;

use crate::error::{require_finite, Error, Result};
use crate::gaussian::{phi, std_normal_quantile, Probability};
use crate::scalar::Scalar;

/// Sensitivity and decision cutoff of a Gaussian detector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectorParams<T> {
    pub dprime: T,
    pub criterion: T,
}

impl<T: Scalar> DetectorParams<T> {
    pub fn new(dprime: T, criterion: T) -> Result<Self> {
        require_finite("dprime", dprime)?;
        require_finite("criterion", criterion)?;
        if dprime < T::zero() {
            return Err(Error::InvalidParameter(format!(
                "dprime must be nonnegative, got {dprime:?}"
            )));
        }
        Ok(Self { dprime, criterion })
    }
}

/// Signal prior and outcome values. Costs are negative values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PayoffContext<T> {
    pub p_signal: T,
    pub j_tp: T,
    pub j_fp: T,
    pub j_tn: T,
    pub j_fn: T,
}

impl<T: Scalar> PayoffContext<T> {
    pub fn new(p_signal: T, j_tp: T, j_fp: T, j_tn: T, j_fn: T) -> Result<Self> {
        for (name, v) in [
            ("p_signal", p_signal),
            ("j_tp", j_tp),
            ("j_fp", j_fp),
            ("j_tn", j_tn),
            ("j_fn", j_fn),
        ] {
            require_finite(name, v)?;
        }
        if !(p_signal > T::zero() && p_signal < T::one()) {
            return Err(Error::InvalidParameter(format!(
                "p_signal must lie strictly inside (0, 1), got {p_signal:?}"
            )));
        }
        if !(j_tp > j_fn) {
            return Err(Error::InvalidParameter(
                "a hit must be worth more than a miss (j_tp > j_fn)".into(),
            ));
        }
        if !(j_tn > j_fp) {
            return Err(Error::InvalidParameter(
                "a correct rejection must be worth more than a false alarm (j_tn > j_fp)".into(),
            ));
        }
        Ok(Self {
            p_signal,
            j_tp,
            j_fp,
            j_tn,
            j_fn,
        })
    }

    /// Context with the given payoff ratio `U`: hits and correct rejections
    /// are worth zero, a miss costs one and a false alarm costs `U`.
    pub fn from_ratio(p_signal: T, payoff_ratio: T) -> Result<Self> {
        require_finite("payoff_ratio", payoff_ratio)?;
        if !(payoff_ratio > T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "payoff ratio must be positive, got {payoff_ratio:?}"
            )));
        }
        Self::new(p_signal, T::zero(), -payoff_ratio, T::zero(), -T::one())
    }

    /// Equal priors, all payoffs symmetric (`U = 1`).
    pub fn symmetric() -> Self {
        Self::from_ratio(T::half(), T::one()).expect("symmetric context is valid")
    }

    /// `U = (J_FP - J_TN) / (J_FN - J_TP)`.
    pub fn payoff_ratio(&self) -> T {
        (self.j_fp - self.j_tn) / (self.j_fn - self.j_tp)
    }

    /// `ln[(1 - P(S1)) / P(S1)]`.
    pub fn ln_prior_odds_against(&self) -> T {
        (T::one() - self.p_signal).ln() - self.p_signal.ln()
    }
}

/// A (hit rate, false-alarm rate) pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatingPoint<T> {
    pub p_tp: Probability<T>,
    pub p_fp: Probability<T>,
}

impl<T: Scalar> OperatingPoint<T> {
    pub fn new(p_tp: T, p_fp: T) -> Result<Self> {
        Ok(Self {
            p_tp: Probability::new(p_tp)?,
            p_fp: Probability::new(p_fp)?,
        })
    }

    /// Applies the rate clamping policy to both rates.
    pub fn clamped(&self) -> Self {
        Self {
            p_tp: self.p_tp.clamped(),
            p_fp: self.p_fp.clamped(),
        }
    }
}

/// `ln β = c · d'`.
pub fn ln_beta_at<T: Scalar>(params: &DetectorParams<T>) -> T {
    params.criterion * params.dprime
}

/// Log of the payoff-optimal likelihood ratio, `ln[(1 - P(S1))/P(S1) · U]`.
pub fn optimal_ln_beta<T: Scalar>(ctx: &PayoffContext<T>) -> T {
    ctx.ln_prior_odds_against() + ctx.payoff_ratio().ln()
}

/// Criterion on the observation axis that realises `ln_beta`.
pub fn criterion_from_ln_beta<T: Scalar>(ln_beta: T, dprime: T) -> Result<T> {
    require_finite("ln_beta", ln_beta)?;
    if !(dprime > T::zero()) || !dprime.is_finite() {
        return Err(Error::DegenerateDetector(dprime.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(ln_beta / dprime)
}

pub fn rates_at<T: Scalar>(params: &DetectorParams<T>) -> OperatingPoint<T> {
    let half = params.dprime * T::half();
    OperatingPoint {
        p_tp: phi(half - params.criterion),
        p_fp: phi(-half - params.criterion),
    }
}

fn z_scores<T: Scalar>(op: &OperatingPoint<T>) -> Result<(T, T)> {
    Ok((std_normal_quantile(op.p_tp)?, std_normal_quantile(op.p_fp)?))
}

/// `d' = z_TP - z_FP`. Rates at exactly 0 or 1 are rejected; clamp first.
pub fn dprime_from_rates<T: Scalar>(op: &OperatingPoint<T>) -> Result<T> {
    let (z_tp, z_fp) = z_scores(op)?;
    Ok(z_tp - z_fp)
}

/// `ln β = -(z_TP² - z_FP²) / 2`.
pub fn ln_beta_from_rates<T: Scalar>(op: &OperatingPoint<T>) -> Result<T> {
    let (z_tp, z_fp) = z_scores(op)?;
    Ok(-T::half() * (z_tp * z_tp - z_fp * z_fp))
}

/// One operating point per criterion. The grid has to be finite and sorted.
pub fn roc_curve<T: Scalar>(dprime: T, criteria_grid: &[T]) -> Result<Vec<OperatingPoint<T>>> {
    if criteria_grid.iter().any(|c| !c.is_finite()) {
        return Err(Error::Domain("criteria grid must be finite".into()));
    }
    if criteria_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("criteria grid must be sorted ascending".into()));
    }
    criteria_grid
        .iter()
        .map(|&c| DetectorParams::new(dprime, c).map(|p| rates_at(&p)))
        .collect()
}

/// Expected value per trial of responding with `op` under `ctx`.
pub fn expected_payoff<T: Scalar>(op: &OperatingPoint<T>, ctx: &PayoffContext<T>) -> T {
    let p = ctx.p_signal;
    let signal = op.p_tp.value() * ctx.j_tp + op.p_tp.complement() * ctx.j_fn;
    let noise = op.p_fp.value() * ctx.j_fp + op.p_fp.complement() * ctx.j_tn;
    p * signal + (T::one() - p) * noise
}

use serde::Serialize;

use super::maximize::{maximize_d_eff, SearchConfig};
use super::{contingent_optimal_criteria, d_eff_of, make_aid, ContingentCriteria};
use crate::error::{require_finite, Error, Result};
use crate::scalar::Scalar;
use crate::sdt::PayoffContext;

/// One point of a trust sweep. `ratio` is `Δ ln β / Δ ln β*`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrustSweepPoint<T> {
    pub ratio: T,
    pub d_eff: T,
    pub d_eff_over_d_h: T,
}

/// Scales the spread of a criterion pair about its midpoint by `ratio`.
///
/// `ratio = 1` leaves the pair unchanged, `ratio = 0` collapses both criteria
/// onto the midpoint (the aid is ignored), large ratios make the human follow
/// the aid.
pub fn trust_scaled_criteria<T: Scalar>(optimal: &ContingentCriteria<T>, ratio: T) -> Result<ContingentCriteria<T>> {
    require_finite("ratio", ratio)?;
    if ratio < T::zero() {
        return Err(Error::InvalidParameter(format!(
            "trust ratio must be nonnegative, got {ratio:?}"
        )));
    }
    if ratio == T::one() {
        return Ok(*optimal);
    }
    let mid = (optimal.ln_beta_alert + optimal.ln_beta_no_alert) * T::half();
    Ok(ContingentCriteria {
        ln_beta_alert: mid + ratio * (optimal.ln_beta_alert - mid),
        ln_beta_no_alert: mid + ratio * (optimal.ln_beta_no_alert - mid),
    })
}

/// `d'_eff` as the human's criterion shift is scaled away from optimal.
///
/// The aid cutoff is held at the maximiser of [`maximize_d_eff`].
pub fn trust_sweep<T: Scalar>(
    d_h: T,
    d_a: T,
    ctx: &PayoffContext<T>,
    ratios: &[T],
    search: &SearchConfig<T>,
) -> Result<Vec<TrustSweepPoint<T>>> {
    if let Some(bad) = ratios.iter().find(|k| !(**k > T::zero()) || !k.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "trust ratios must be positive, got {bad:?}"
        )));
    }
    let optimum = maximize_d_eff(d_h, d_a, ctx, search)?;
    let aid = make_aid(d_a, optimum.c_a_star)?;
    let optimal = contingent_optimal_criteria(&aid, ctx)?;
    ratios
        .iter()
        .map(|&ratio| {
            let criteria = trust_scaled_criteria(&optimal, ratio)?;
            let d_eff = d_eff_of(d_h, &criteria, &aid)?;
            Ok(TrustSweepPoint {
                ratio,
                d_eff,
                d_eff_over_d_h: d_eff / d_h,
            })
        })
        .collect()
}

/// `count` points spaced evenly in `log10` from `min` to `max` inclusive.
pub fn log_spaced<T: Scalar>(min: T, max: T, count: usize) -> Result<Vec<T>> {
    if !(min > T::zero() && max >= min) || !max.is_finite() || count == 0 {
        return Err(Error::InvalidParameter(
            "log spacing needs 0 < min <= max and at least one point".into(),
        ));
    }
    if count == 1 {
        return Ok(vec![min]);
    }
    let (lo, hi) = (min.log10(), max.log10());
    let last = T::from_usize(count - 1).expect("count fits in scalar");
    Ok((0..count)
        .map(|i| {
            let t = T::from_usize(i).expect("index fits in scalar") / last;
            T::lit(10.0).powf(lo + (hi - lo) * t)
        })
        .collect())
}

/// 81 ratios from 0.01 to 100, twenty per decade; ratio 1 is on the grid.
pub fn default_trust_ratios<T: Scalar>() -> Vec<T> {
    (-40..=40).map(|i| T::lit(10f64.powf(f64::from(i) / 20.0))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::PayoffContext;

    #[test]
    fn scaling_examples() {
        let pair = ContingentCriteria {
            ln_beta_alert: -1.0_f64,
            ln_beta_no_alert: 1.0,
        };
        assert_eq!(trust_scaled_criteria(&pair, 1.0).unwrap(), pair);
        assert_eq!(
            trust_scaled_criteria(&pair, 0.0).unwrap(),
            ContingentCriteria::uniform(0.0)
        );
        let tripled = trust_scaled_criteria(&pair, 3.0).unwrap();
        assert_eq!((tripled.ln_beta_alert, tripled.ln_beta_no_alert), (-3.0, 3.0));
        assert!(trust_scaled_criteria(&pair, -0.5).is_err());
    }

    #[test]
    fn scaling_keeps_midpoint() {
        let pair = ContingentCriteria {
            ln_beta_alert: -2.3_f64,
            ln_beta_no_alert: 0.4,
        };
        let scaled = trust_scaled_criteria(&pair, 0.37).unwrap();
        let mid = |c: &ContingentCriteria<f64>| (c.ln_beta_alert + c.ln_beta_no_alert) / 2.0;
        assert!((mid(&scaled) - mid(&pair)).abs() < 1e-15);
        assert!((scaled.shift() - 0.37 * pair.shift()).abs() < 1e-15);
    }

    #[test]
    fn zero_trust_is_the_human_alone() {
        let ctx = PayoffContext::symmetric();
        let aid = make_aid(2.0_f64, 0.1).unwrap();
        let optimal = contingent_optimal_criteria(&aid, &ctx).unwrap();
        let ignored = trust_scaled_criteria(&optimal, 0.0).unwrap();
        assert!((d_eff_of(1.0, &ignored, &aid).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn sweep_limits_and_peak() {
        let ctx = PayoffContext::symmetric();
        let ratios = default_trust_ratios::<f64>();
        let sweep = trust_sweep(1.0, 0.5, &ctx, &ratios, &SearchConfig::default()).unwrap();
        let last = sweep.last().unwrap();
        assert!((last.d_eff_over_d_h - 0.5).abs() < 1e-3);
        let peak = sweep
            .iter()
            .max_by(|a, b| a.d_eff.partial_cmp(&b.d_eff).unwrap())
            .unwrap();
        assert!((peak.ratio - 1.0).abs() < 1e-12);
        for p in &sweep {
            assert_eq!(p.d_eff_over_d_h, p.d_eff / 1.0);
        }
    }

    #[test]
    fn sweep_rejects_nonpositive_ratios() {
        let ctx = PayoffContext::symmetric();
        assert!(trust_sweep(1.0, 1.0, &ctx, &[1.0, 0.0], &SearchConfig::default()).is_err());
    }

    #[test]
    fn log_spacing() {
        let r = log_spaced(0.01_f64, 100.0, 5).unwrap();
        let expected = [0.01, 0.1, 1.0, 10.0, 100.0];
        for (a, b) in r.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12 * b);
        }
        assert!(log_spaced(0.0, 1.0, 3).is_err());
        assert_eq!(default_trust_ratios::<f64>()[40], 1.0);
        assert_eq!(default_trust_ratios::<f64>().len(), 81);
    }
}

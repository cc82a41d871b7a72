use rayon::prelude::*;
use serde::Serialize;

use super::maximize::{maximize_d_eff, SearchConfig};
use crate::error::{require_finite, Error, Result};
use crate::optimize::golden_section_max;
use crate::scalar::Scalar;
use crate::sdt::PayoffContext;

/// `√(d_m² + d_n²)`: the best two detectors can do when both pass on their
/// continuous observations.
pub fn continuous_fusion_bound<T: Scalar>(d_m: T, d_n: T) -> Result<T> {
    for (name, d) in [("d_m", d_m), ("d_n", d_n)] {
        require_finite(name, d)?;
        if d < T::zero() {
            return Err(Error::InvalidParameter(format!("{name} must be nonnegative")));
        }
    }
    Ok(d_m.hypot(d_n))
}

/// `√(d_h² + d_a² − α d_h d_a)`, the closed-form estimate of the maximal
/// tandem sensitivity.
pub fn approx_d_eff<T: Scalar>(d_h: T, d_a: T, alpha: T) -> Result<T> {
    require_finite("d_h", d_h)?;
    require_finite("d_a", d_a)?;
    require_finite("alpha", alpha)?;
    let radicand = d_h * d_h + d_a * d_a - alpha * d_h * d_a;
    if radicand < T::zero() {
        return Err(Error::Domain(format!(
            "negative radicand {radicand:?} for d_h = {d_h:?}, d_a = {d_a:?}, alpha = {alpha:?}"
        )));
    }
    Ok(radicand.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaFitPoint<T> {
    pub d_h: T,
    pub d_a: T,
    pub c_a_star: T,
    pub observed: T,
    pub predicted: T,
    pub residual: T,
}

/// Least-squares α together with the quality of the resulting predictions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaFit<T> {
    pub alpha: T,
    /// Pearson correlation of predicted and observed `d'_eff*`, floored at 0.
    pub correlation: T,
    /// `1 − SSE/SST`, floored at 0.
    pub variance_explained: T,
    pub points: Vec<AlphaFitPoint<T>>,
}

/// `{0.25, 0.5, ..., 3.0}²`, 144 pairs.
pub fn default_alpha_grid<T: Scalar>() -> Vec<(T, T)> {
    let axis: Vec<T> = (1..=12).map(|i| T::lit(0.25 * f64::from(i))).collect();
    axis.iter()
        .flat_map(|&d_h| axis.iter().map(move |&d_a| (d_h, d_a)))
        .collect()
}

const FIT_TOLERANCE: f64 = 1e-12;
const EXACT_RESIDUAL: f64 = 1e-9;

/// Fits α in `[0, 1]` to the maximal tandem sensitivities of `grid`.
pub fn fit_alpha<T: Scalar>(grid: &[(T, T)], ctx: &PayoffContext<T>, search: &SearchConfig<T>) -> Result<AlphaFit<T>> {
    if grid.is_empty() {
        return Err(Error::FitUndefined("empty grid".into()));
    }
    if grid.iter().all(|&(_, d_a)| d_a == T::zero()) {
        return Err(Error::FitUndefined(
            "every pair has an uninformative aid, alpha has no effect".into(),
        ));
    }

    let observed: Vec<(T, T, T, T)> = grid
        .par_iter()
        .map(|&(d_h, d_a)| maximize_d_eff(d_h, d_a, ctx, search).map(|opt| (d_h, d_a, opt.c_a_star, opt.d_eff_star)))
        .collect::<Result<_>>()?;

    let sse = |alpha: T| -> T {
        observed
            .iter()
            .map(|&(d_h, d_a, _, obs)| {
                let r = (d_h * d_h + d_a * d_a - alpha * d_h * d_a).sqrt() - obs;
                r * r
            })
            .sum()
    };
    let (alpha, _) = golden_section_max(|a| -sse(a), T::zero(), T::one(), T::lit(FIT_TOLERANCE));

    let points = observed
        .iter()
        .map(|&(d_h, d_a, c_a_star, obs)| {
            let predicted = approx_d_eff(d_h, d_a, alpha)?;
            Ok(AlphaFitPoint {
                d_h,
                d_a,
                c_a_star,
                observed: obs,
                predicted,
                residual: obs - predicted,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let (correlation, variance_explained) = fit_quality(&points);
    Ok(AlphaFit {
        alpha,
        correlation,
        variance_explained,
        points,
    })
}

fn fit_quality<T: Scalar>(points: &[AlphaFitPoint<T>]) -> (T, T) {
    let n = T::from_usize(points.len()).expect("grid size fits in scalar");
    let mean_obs = points.iter().map(|p| p.observed).sum::<T>() / n;
    let mean_pred = points.iter().map(|p| p.predicted).sum::<T>() / n;
    let (mut sxy, mut sxx, mut syy, mut sse) = (T::zero(), T::zero(), T::zero(), T::zero());
    for p in points {
        let dx = p.predicted - mean_pred;
        let dy = p.observed - mean_obs;
        sxy = sxy + dx * dy;
        sxx = sxx + dx * dx;
        syy = syy + dy * dy;
        sse = sse + p.residual * p.residual;
    }
    if points.len() < 2 || sxx == T::zero() || syy == T::zero() {
        // Nothing to correlate; call the fit perfect iff it reproduces the data.
        let exact = points.iter().all(|p| p.residual.abs() <= T::lit(EXACT_RESIDUAL));
        let q = if exact { T::one() } else { T::zero() };
        return (q, q);
    }
    let correlation = (sxy / (sxx * syy).sqrt()).max(T::zero()).min(T::one());
    let variance_explained = (T::one() - sse / syy).max(T::zero()).min(T::one());
    (correlation, variance_explained)
}

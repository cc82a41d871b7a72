use serde::Serialize;

use super::{contingent_optimal_criteria, d_eff_of, make_aid};
use crate::error::{require_finite, Error, Result};
use crate::optimize::{golden_section_max, grid_max};
use crate::scalar::Scalar;
use crate::sdt::PayoffContext;

/// How the aid cutoff is searched.
///
/// The bracket is `±(margin + d'_A / 2)`; it is scanned at `step` and the best
/// grid point is refined by golden-section search down to `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchConfig<T> {
    pub margin: T,
    pub step: T,
    pub tolerance: T,
}

impl<T: Scalar> Default for SearchConfig<T> {
    fn default() -> Self {
        Self {
            margin: T::lit(4.0),
            step: T::lit(0.01),
            tolerance: T::lit(1e-6),
        }
    }
}

impl<T: Scalar> SearchConfig<T> {
    fn validate(&self) -> Result<()> {
        if !(self.margin >= T::zero() && self.step > T::zero() && self.tolerance > T::zero())
            || !self.margin.is_finite()
            || !self.step.is_finite()
        {
            return Err(Error::InvalidParameter(
                "search needs a nonnegative margin and positive step and tolerance".into(),
            ));
        }
        Ok(())
    }
}

/// Best aid cutoff and the `d'_eff` it reaches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AidOptimum<T> {
    pub c_a_star: T,
    pub d_eff_star: T,
}

/// Maximal `d'_eff` over aid cutoffs, with the human's contingent criteria
/// re-optimised for payoff at every candidate cutoff.
///
/// An uninformative aid (`d_a = 0`) short-circuits to `d'_eff = d_h` with the
/// cutoff reported as zero.
pub fn maximize_d_eff<T: Scalar>(
    d_h: T,
    d_a: T,
    ctx: &PayoffContext<T>,
    search: &SearchConfig<T>,
) -> Result<AidOptimum<T>> {
    require_finite("d_h", d_h)?;
    require_finite("d_a", d_a)?;
    if !(d_h > T::zero()) {
        return Err(Error::DegenerateDetector(d_h.to_f64().unwrap_or(f64::NAN)));
    }
    if d_a < T::zero() {
        return Err(Error::InvalidParameter(format!("d_a must be nonnegative, got {d_a:?}")));
    }
    search.validate()?;
    if d_a == T::zero() {
        return Ok(AidOptimum {
            c_a_star: T::zero(),
            d_eff_star: d_h,
        });
    }

    let objective = |c_a: T| -> T {
        make_aid(d_a, c_a)
            .and_then(|aid| {
                let criteria = contingent_optimal_criteria(&aid, ctx)?;
                d_eff_of(d_h, &criteria, &aid)
            })
            .unwrap_or_else(|_| T::nan())
    };

    let half_width = search.margin + d_a * T::half();
    let (coarse_c, coarse_d) = grid_max(objective, -half_width, half_width, search.step)
        .ok_or_else(|| Error::Domain("d_eff undefined over the whole search bracket".into()))?;

    let lo = (coarse_c - search.step).max(-half_width);
    let hi = (coarse_c + search.step).min(half_width);
    let (fine_c, fine_d) = golden_section_max(objective, lo, hi, search.tolerance);

    Ok(if fine_d.is_finite() && fine_d >= coarse_d {
        AidOptimum {
            c_a_star: fine_c,
            d_eff_star: fine_d,
        }
    } else {
        AidOptimum {
            c_a_star: coarse_c,
            d_eff_star: coarse_d,
        }
    })
}

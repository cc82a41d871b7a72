//! One-dimensional bracketed maximisation.

use crate::scalar::Scalar;

/// Golden-section search for the maximum of `f` on `[lo, hi]`.
///
/// Returns `(argmax, max)` once the bracket is narrower than `tolerance`.
/// `f` is assumed unimodal on the bracket.
pub fn golden_section_max<T, F>(mut f: F, lo: T, hi: T, tolerance: T) -> (T, T)
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    let inv_phi = T::lit(0.618_033_988_749_895);
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let tol = tolerance.max(T::epsilon());
    // The iteration count bounds runaway loops on NaN-valued objectives.
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Evaluates `f` on `lo, lo + step, ...` up to `hi` and returns the best point.
/// Points where `f` is not finite are skipped.
pub fn grid_max<T, F>(mut f: F, lo: T, hi: T, step: T) -> Option<(T, T)>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    let n = ((hi - lo) / step).round().to_usize()?;
    let mut best: Option<(T, T)> = None;
    for i in 0..=n {
        let x = lo + step * T::from_usize(i)?;
        let v = f(x);
        if !v.is_finite() {
            continue;
        }
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((x, v));
        }
    }
    best
}

//! The logarithmic mean `L(a, b) = (a - b) / (ln a - ln b)`, with `L(a, a) = a`.

use crate::error::{Error, Result};

/// Relative gap below which the two endpoints are treated as equal and the
/// analytic limit `L(a, a) = a` is returned.
pub const NEAR_EQUAL_RELATIVE: f64 = 1e-12;

/// Logarithmic mean of two strictly positive numbers.
///
/// The result always lies in `[min(a, b), max(a, b)]` and between the
/// geometric and arithmetic means.
pub fn log_mean(a: f64, b: f64) -> Result<f64> {
    check_positive("a", a)?;
    check_positive("b", b)?;
    Ok(log_mean_unchecked(a, b))
}

fn check_positive(argument: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveArgument { argument, value })
    }
}

/// Same as [`log_mean`] for inputs already known to be positive and finite.
pub(crate) fn log_mean_unchecked(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    let gap = hi - lo;
    if gap <= NEAR_EQUAL_RELATIVE * hi {
        return a;
    }
    let log_ratio = if hi <= 2.0 * lo {
        // hi - lo is exact here (Sterbenz), and ln_1p keeps full relative
        // precision for ratios close to one.
        (gap / lo).ln_1p()
    } else {
        let q = hi / lo;
        if q.is_finite() {
            q.ln()
        } else {
            hi.ln() - lo.ln()
        }
    };
    (gap / log_ratio).clamp(lo, hi)
}

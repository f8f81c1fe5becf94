//! Bisection for monotone scalar equations.

/// Bisection on `[lo, hi]` where `f(lo)` and `f(hi)` have opposite signs (or
/// one is zero). Stops once the bracket is narrower than `tol`.
pub fn bisect(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut f_lo = f(lo);
    if f_lo == 0.0 {
        return lo;
    }
    debug_assert!(f_lo.signum() != f(hi).signum() || f(hi) == 0.0, "root not bracketed");
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

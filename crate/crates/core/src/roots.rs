//! Scalar root finding by bisection.

/// Bisects `f` on `[lo, hi]` down to an interval of width `tol`, assuming
/// `f(lo)` and `f(hi)` have opposite signs (any orientation). Returns the
/// interval midpoint.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    debug_assert!(lo <= hi);
    let f_lo = f(lo);
    if f_lo == 0.0 {
        return lo;
    }
    let descending = f_lo > 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // ran out of floating-point resolution
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == descending {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

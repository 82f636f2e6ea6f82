//! Bisection on monotone scalar functions.

/// Lower end of every search interval; `alpha` is kept strictly positive.
pub const EPS: f64 = 1e-9;
/// Interval width at which bisection stops.
pub const TOL: f64 = 1e-10;

/// Outcome of a sign-change search on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bracket {
    /// A sign change was found and refined to the given point.
    Root(f64),
    /// `f >= 0` at both ends.
    AllPositive,
    /// `f < 0` at both ends.
    AllNegative,
}

/// Bisects a monotone (either direction) `f` on `[lo, hi]`.
///
/// The `hi` end is probed first, so a function that is zero at `hi` reports
/// `AllPositive` when increasing and a root at `hi` when decreasing.
pub fn bisect(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Bracket {
    let f_lo = f(lo);
    let f_hi = f(hi);
    let increasing = match (f_lo < 0.0, f_hi < 0.0) {
        (false, false) => return Bracket::AllPositive,
        (true, true) => return Bracket::AllNegative,
        (true, false) => true,
        (false, true) => false,
    };
    let (mut a, mut b) = (lo, hi);
    while b - a > TOL {
        let mid = 0.5 * (a + b);
        let below = f(mid) < 0.0;
        // For an increasing f the root lies above any negative probe.
        if below == increasing {
            a = mid;
        } else {
            b = mid;
        }
    }
    Bracket::Root(0.5 * (a + b))
}

/// Maximizer on `[lo, hi]` of a concave function with derivative `df`
/// (nonincreasing). Returns an endpoint when `df` keeps one sign.
pub fn concave_argmax(df: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    match bisect(df, lo, hi) {
        Bracket::Root(x) => x,
        Bracket::AllPositive => hi,
        Bracket::AllNegative => lo,
    }
}

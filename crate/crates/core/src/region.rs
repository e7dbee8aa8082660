//! Geometry of the privacy region.
//!
//! For privacy parameters (ε, δ), the region is the set of rate pairs
//! (x, y) — x the false-negative rate, y the false-positive rate — that any
//! distinguisher against an (ε, δ)-differentially-private mechanism can
//! achieve. It is cut out of the unit square by four linear inequalities:
//!
//! ```text
//!   x + e^ε y ≥ 1 − δ        y + e^ε x ≥ 1 − δ
//!   y + e^ε x ≤ e^ε + δ      x + e^ε y ≤ e^ε + δ
//! ```
//!
//! The region grows with ε and δ, is symmetric under swapping the two rates
//! and under (x, y) → (1 − x, 1 − y), and at δ = 1 covers the whole square.
//!
//! This module provides membership tests, the vertical slice of the region
//! at a given x (used by the estimator integrals), the pointwise ε lower
//! bound implied by an observed rate pair, and the membership-advantage
//! bound.

use crate::error::{Error, Result};

/// A privacy parameter pair. `epsilon` is an extended nonnegative real
/// (`f64::INFINITY` allowed); `delta` lies in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrivacyParams {
    pub epsilon: f64,
    pub delta: f64,
}

impl PrivacyParams {
    /// Validates ε ≥ 0 (∞ allowed) and δ ∈ [0, 1].
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        if epsilon.is_nan() || epsilon < 0.0 {
            return Err(Error::domain(format!(
                "epsilon must be a nonnegative extended real, got {epsilon}"
            )));
        }
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::domain(format!(
                "delta must lie in [0, 1], got {delta}"
            )));
        }
        Ok(PrivacyParams { epsilon, delta })
    }
}

/// A rate pair: `x` the false-negative rate, `y` the false-positive rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub x: f64,
    pub y: f64,
}

impl RatePoint {
    /// Validates both coordinates in [0, 1].
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y) {
            return Err(Error::domain(format!(
                "rate point coordinates must lie in [0, 1], got ({x}, {y})"
            )));
        }
        Ok(RatePoint { x, y })
    }
}

/// `e^eps * v` without overflow: evaluated in log space once the product
/// would leave the double range, and with the convention ∞ · 0 = 0 so that
/// an infinite ε degrades each inequality gracefully.
fn exp_scale(eps: f64, v: f64) -> f64 {
    debug_assert!(v >= 0.0);
    if v == 0.0 {
        return 0.0;
    }
    if eps > 30.0 {
        // Past here e^ε starts to dwarf everything in the unit square;
        // compare in log space to decide between "huge" and representable.
        if eps.is_infinite() || eps + v.ln() > 700.0 {
            return f64::INFINITY;
        }
    }
    eps.exp() * v
}

/// Membership test: is the rate pair inside the privacy region?
pub fn in_region(p: RatePoint, params: PrivacyParams) -> bool {
    let (x, y) = (p.x, p.y);
    let eps = params.epsilon;
    let delta = params.delta;
    let lo = 1.0 - delta;
    // Upper constraints compare against e^ε + δ; rearranged as
    // (lhs − δ) ≤ e^ε (1 − other) to stay finite for large ε.
    x + exp_scale(eps, y) >= lo
        && y + exp_scale(eps, x) >= lo
        && y - delta <= exp_scale(eps, 1.0 - x)
        && x - delta <= exp_scale(eps, 1.0 - y)
}

/// The vertical slice of the region at abscissa `x`: returns `(y_lo, y_hi)`
/// with
///
/// ```text
///   y_lo = max{ 0, 1−δ−e^ε x, (1−δ−x) e^{−ε} }
///   y_hi = min{ 1, δ+e^ε (1−x), 1+(δ−x) e^{−ε} }
/// ```
///
/// The slice is `[y_lo, y_hi]` when `y_lo ≤ y_hi` and empty otherwise.
/// Requires finite ε.
pub fn region_band(x: f64, params: PrivacyParams) -> (f64, f64) {
    debug_assert!(params.epsilon.is_finite());
    let eps = params.epsilon;
    let delta = params.delta;
    let exp_neg = (-eps).exp();
    let y_lo = (1.0 - delta - exp_scale(eps, x))
        .max((1.0 - delta - x) * exp_neg)
        .max(0.0);
    let y_hi = (delta + exp_scale(eps, 1.0 - x))
        .min(1.0 + (delta - x) * exp_neg)
        .min(1.0);
    (y_lo, y_hi)
}

/// Abscissas where either band boundary switches branch: the kinks of
/// `y_lo` and `y_hi` as functions of x, restricted to (0, 1) and sorted.
/// These are exactly the breakpoints the estimator integrals need.
pub(crate) fn band_kinks(params: PrivacyParams) -> Vec<f64> {
    let eps = params.epsilon;
    let delta = params.delta;
    let ee = eps.exp();
    // y_lo switches steep → gentle at the diagonal vertex (1−δ)/(1+e^ε) and
    // reaches 0 at 1−δ; y_hi mirrors both under x → 1−x.
    let vertex = (1.0 - delta) / (1.0 + ee);
    let mut kinks = vec![vertex, 1.0 - delta, delta, 1.0 - vertex];
    kinks.retain(|x| x.is_finite() && *x > 0.0 && *x < 1.0);
    kinks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    kinks.dedup();
    kinks
}

/// Pointwise ε lower bound implied by an observed rate pair: for interior
/// points, the smallest ε whose region contains the point — the largest of
/// the four constraint activations
///
/// ```text
///   ln((1−δ−fpr)/fnr)   ln((1−δ−fnr)/fpr)      (better than chance)
///   ln((fpr−δ)/(1−fnr)) ln((fnr−δ)/(1−fpr))    (worse than chance)
/// ```
///
/// where a branch only competes while its numerator is positive, clamped
/// below at 0. At the edges of the square the literal threshold is infinite
/// wherever a competing denominator vanishes; the finite edge conventions
/// keep interval endpoints built from empirical rates usable:
///
/// * exactly one rate 0, the other r: `ln((1−δ)/r)`, clamped at 0;
/// * exactly one rate 1, the other r: `ln((1−δ)/(1−r))`, clamped at 0
///   (the image of the zero-rate convention under the region's symmetry
///   (x, y) → (1−x, 1−y));
/// * both rates 0, or both 1, with δ < 1: +∞.
///
/// Total on the unit square; never errors.
pub fn epsilon_lower_bound_point(fnr: f64, fpr: f64, delta: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&fnr));
    debug_assert!((0.0..=1.0).contains(&fpr));
    debug_assert!((0.0..=1.0).contains(&delta));
    let lo = 1.0 - delta;
    if (fnr == 0.0 && fpr == 0.0) || (fnr == 1.0 && fpr == 1.0) {
        return if delta < 1.0 { f64::INFINITY } else { 0.0 };
    }
    if fnr == 0.0 || fpr == 0.0 {
        let r = if fnr == 0.0 { fpr } else { fnr };
        return (lo / r).ln().max(0.0);
    }
    if fnr == 1.0 || fpr == 1.0 {
        let r = if fnr == 1.0 { fpr } else { fnr };
        return (lo / (1.0 - r)).ln().max(0.0);
    }
    let mut best = 0.0_f64;
    if lo - fpr > 0.0 {
        best = best.max(((lo - fpr) / fnr).ln());
    }
    if lo - fnr > 0.0 {
        best = best.max(((lo - fnr) / fpr).ln());
    }
    if fpr - delta > 0.0 {
        best = best.max(((fpr - delta) / (1.0 - fnr)).ln());
    }
    if fnr - delta > 0.0 {
        best = best.max(((fnr - delta) / (1.0 - fpr)).ln());
    }
    best
}

/// Membership advantage of an attack with the given error rates:
/// `(1 − fnr) − fpr`, i.e. true-positive rate minus false-positive rate.
pub fn mia_advantage(fnr: f64, fpr: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&fnr));
    debug_assert!((0.0..=1.0).contains(&fpr));
    (1.0 - fnr) - fpr
}

/// Upper bound on the membership advantage of any attack against an
/// (ε, δ)-DP mechanism: `(e^ε − 1 + 2δ)/(e^ε + 1)`.
///
/// Evaluated as `1 − (2 − 2δ)/(e^ε + 1)`, which avoids cancellation for
/// small ε and overflows gracefully to 1 as ε → ∞.
pub fn advantage_bound(params: PrivacyParams) -> f64 {
    let eps = params.epsilon;
    let delta = params.delta;
    if eps.is_infinite() {
        return 1.0;
    }
    if eps > 700.0 {
        return 1.0;
    }
    1.0 - (2.0 - 2.0 * delta) / (eps.exp() + 1.0)
}

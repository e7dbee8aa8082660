//! The core estimator: the posterior law of the empirical privacy
//! parameter ε̂ induced by a joint rate posterior, together with
//! equal-tailed credible intervals and the confidence-interval-derived
//! baseline estimates.
//!
//! The construction: the false-negative and false-positive rates carry
//! independent Beta posteriors. Pushing that product law through the
//! region-membership threshold — the smallest ε whose privacy region
//! contains the rate pair — yields a distribution over ε̂ with a point mass
//! at 0 (rate pairs already consistent with ε = 0) and a continuous part.
//! The CDF at ε is exactly the posterior probability mass inside the
//! region:
//!
//! ```text
//!   F(ε) = ∬_{R(ε,δ)} f_FNR(x) f_FPR(y) dy dx
//!        = ∫₀¹ f_FNR(x) · [ G(y_hi(x)) − G(y_lo(x)) ]₊ dx
//! ```
//!
//! with G the FPR-posterior CDF and (y_lo, y_hi) the vertical slice of the
//! region. The integrand is piecewise smooth; its kinks are the band's
//! branch switches plus the abscissas where a boundary crosses a quantile
//! of the FPR posterior, and all of them are passed to the quadrature as
//! breakpoints.

use crate::error::{Error, Result};
use crate::numeric::quad::{adaptive_integrate, tanh_sinh, QuadratureSpec};
use crate::numeric::special;
use crate::rates::{
    clopper_pearson_interval, jeffreys_interval, jeffreys_posterior, BetaPosterior, ConfusionTally,
    RateInterval, Sidedness,
};
use crate::region::{band_kinks, epsilon_lower_bound_point, PrivacyParams};

/// Default search cap for ε quantiles: estimates above this are reported
/// as unbounded. Well below the ~709 overflow threshold of e^ε and far
/// beyond any privacy budget with practical meaning.
pub const DEFAULT_EPS_CAP: f64 = 50.0;

/// Absolute tolerance of the quantile bisection, in ε.
const QUANTILE_EPS_TOL: f64 = 1e-6;

/// FPR-posterior quantile levels whose boundary crossings are used as
/// quadrature breakpoints: dense enough that the integrand varies gently
/// between consecutive cuts.
const CROSSING_QUANTILES: [f64; 19] = [
    1e-5, 1e-4, 1e-3, 0.005, 0.02, 0.05, 0.1, 0.2, 0.35, 0.5, 0.65, 0.8, 0.9, 0.95, 0.98, 0.995,
    0.999, 0.9999, 0.99999,
];

/// Fixed cuts in the u = F_FNR(x) variable used by the substituted
/// integration path; they bound the per-piece stretch of the inverse map.
const U_SPLITS: [f64; 9] = [0.001, 0.01, 0.05, 0.2, 0.5, 0.8, 0.95, 0.99, 0.999];

/// Independent Beta posteriors for the two error rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointRatePosterior {
    pub fnr: BetaPosterior,
    pub fpr: BetaPosterior,
}

/// Posterior over the rate pair given a confusion tally: the FNR component
/// is the Beta update on (false negatives | positives), the FPR component
/// on (false positives | negatives). A class with no trials leaves that
/// component equal to the prior.
pub fn joint_posterior(
    tally: &ConfusionTally,
    prior: &BetaPosterior,
) -> Result<JointRatePosterior> {
    let fnr = jeffreys_posterior(tally.false_neg, tally.positives(), prior)?;
    let fpr = jeffreys_posterior(tally.false_pos, tally.negatives(), prior)?;
    Ok(JointRatePosterior { fnr, fpr })
}

/// Which estimator produced an ε interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalMethod {
    Bayesian,
    JeffreysCi,
    ClopperPearsonCi,
}

impl IntervalMethod {
    pub fn label(&self) -> &'static str {
        match self {
            IntervalMethod::Bayesian => "bayesian",
            IntervalMethod::JeffreysCi => "jeffreys",
            IntervalMethod::ClopperPearsonCi => "clopper-pearson",
        }
    }
}

/// Which confidence-interval family backs a CI-derived ε estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CiFamily {
    ClopperPearson,
    Jeffreys,
}

/// An interval estimate for ε. `hi` may be `f64::INFINITY` when the data
/// cannot bound ε from above.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonInterval {
    pub lo: f64,
    pub hi: f64,
    pub alpha: f64,
    pub method: IntervalMethod,
}

impl EpsilonInterval {
    pub fn is_unbounded(&self) -> bool {
        self.hi.is_infinite()
    }

    /// Interval width; infinite for unbounded intervals.
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, eps: f64) -> bool {
        self.lo <= eps && eps <= self.hi
    }
}

/// The posterior law of ε̂: point mass at 0 plus a continuous part, with
/// CDF, PDF, and quantile access.
#[derive(Debug, Clone)]
pub struct EpsilonDistribution {
    pub joint: JointRatePosterior,
    pub delta: f64,
    pub point_mass_at_zero: f64,
    pub quadrature: QuadratureSpec,
    /// Orientation actually evaluated (see `canonical_orientation`); all
    /// quadrature runs against these marginals so the estimator's exact
    /// symmetries survive the numerics bit-for-bit.
    canon: JointRatePosterior,
    /// Cached FPR-posterior quantiles at CROSSING_QUANTILES.
    fpr_quantiles: Vec<f64>,
    /// Cached FNR-posterior quantiles at U_SPLITS.
    fnr_usplit_x: Vec<f64>,
}

/// The ε̂ law is invariant under swapping the two rates (the region is
/// symmetric in (x, y)) and under the reflection (x, y) → (1−x, 1−y) (the
/// region maps onto itself), and 1−Beta(a,b) is exactly Beta(b,a).
/// Evaluating every joint posterior in a fixed representative of its
/// symmetry orbit makes those invariances hold bit-for-bit instead of only
/// up to quadrature tolerance: relabeled tallies (swapped classes, flipped
/// guesses) produce identical estimates.
fn canonical_orientation(joint: &JointRatePosterior) -> JointRatePosterior {
    let flip = |b: BetaPosterior| BetaPosterior {
        alpha: b.beta,
        beta: b.alpha,
    };
    let key = |j: &JointRatePosterior| (j.fnr.alpha, j.fnr.beta, j.fpr.alpha, j.fpr.beta);
    [
        *joint,
        JointRatePosterior {
            fnr: joint.fpr,
            fpr: joint.fnr,
        },
        JointRatePosterior {
            fnr: flip(joint.fnr),
            fpr: flip(joint.fpr),
        },
        JointRatePosterior {
            fnr: flip(joint.fpr),
            fpr: flip(joint.fnr),
        },
    ]
    .into_iter()
    .min_by(|a, b| key(a).partial_cmp(&key(b)).expect("finite Beta shapes"))
    .expect("nonempty orbit")
}

impl EpsilonDistribution {
    /// Builds the distribution and precomputes its quadrature scaffolding
    /// (marginal quantile caches and the point mass at 0).
    pub fn new(joint: JointRatePosterior, delta: f64, quadrature: QuadratureSpec) -> Result<Self> {
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::domain(format!(
                "delta must lie in [0, 1], got {delta}"
            )));
        }
        let canon = canonical_orientation(&joint);
        let fpr_quantiles = CROSSING_QUANTILES
            .iter()
            .map(|&q| canon.fpr.quantile(q))
            .collect::<Result<Vec<_>>>()?;
        let fnr_usplit_x = U_SPLITS
            .iter()
            .map(|&u| canon.fnr.quantile(u))
            .collect::<Result<Vec<_>>>()?;
        let mut dist = EpsilonDistribution {
            joint,
            delta,
            point_mass_at_zero: 0.0,
            quadrature,
            canon,
            fpr_quantiles,
            fnr_usplit_x,
        };
        dist.point_mass_at_zero = dist.cdf(0.0)?;
        Ok(dist)
    }

    /// Breakpoints of the CDF integrand in the x (FNR) variable at a given
    /// ε: band kinks plus every abscissa where an active band boundary
    /// crosses a cached FPR quantile.
    fn integrand_cuts_x(&self, eps: f64) -> Vec<f64> {
        let delta = self.delta;
        let params = PrivacyParams {
            epsilon: eps,
            delta,
        };
        let mut cuts = band_kinks(params);
        let ee = eps.exp();
        let eneg = (-eps).exp();
        let mut push = |x: f64| {
            if x.is_finite() && x > 0.0 && x < 1.0 {
                cuts.push(x);
            }
        };
        for &yq in &self.fpr_quantiles {
            // Lower boundary: steep branch 1−δ−e^ε x, gentle (1−δ−x)e^{−ε}.
            push((1.0 - delta - yq) * eneg);
            push(1.0 - delta - yq * ee);
            // Upper boundary: gentle 1+(δ−x)e^{−ε}, steep δ+e^ε(1−x).
            push(delta + (1.0 - yq) * ee);
            push(1.0 - (yq - delta) * eneg);
        }
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup();
        cuts
    }

    /// Mass of the FPR posterior on the band slice at abscissa x.
    fn slice_mass(&self, x: f64, eps: f64) -> f64 {
        let (y_lo, y_hi) = crate::region::region_band(
            x,
            PrivacyParams {
                epsilon: eps,
                delta: self.delta,
            },
        );
        if y_lo >= y_hi {
            return 0.0;
        }
        let g = &self.canon.fpr;
        (g.cdf_raw(y_hi) - g.cdf_raw(y_lo)).max(0.0)
    }

    /// CDF of ε̂ at `eps`.
    pub fn cdf(&self, eps: f64) -> Result<f64> {
        if eps.is_nan() || eps < 0.0 {
            return Err(Error::domain(format!(
                "epsilon_cdf requires eps >= 0, got {eps}"
            )));
        }
        if eps.is_infinite() || self.delta >= 1.0 {
            return Ok(1.0);
        }
        // Past e^700 the band covers the whole square to double precision.
        if eps > 700.0 {
            return Ok(1.0);
        }
        let cuts = self.integrand_cuts_x(eps);
        let fnr = self.canon.fnr;
        let value = if fnr.alpha >= 1.0 && fnr.beta >= 1.0 {
            // The FNR density is bounded: integrate directly in x.
            adaptive_integrate(
                |x| fnr.pdf(x) * self.slice_mass(x, eps),
                0.0,
                1.0,
                &cuts,
                &self.quadrature,
            )?
        } else {
            self.cdf_substituted(eps, &cuts)?
        };
        Ok(value.clamp(0.0, 1.0))
    }

    /// CDF integral under the substitution u = F_FNR(x), which absorbs the
    /// endpoint singularities of a sub-1-shape FNR density into the
    /// measure: ∫ f(x) g(x) dx = ∫ g(Q(u)) du with Q the FNR quantile map.
    fn cdf_substituted(&self, eps: f64, cuts_x: &[f64]) -> Result<f64> {
        let fnr = self.canon.fnr;
        // Assemble (u, x) pairs: mapped x-cuts plus fixed u-splits, both
        // ends pinned. The x values guide the per-piece inverse map.
        let mut nodes: Vec<(f64, f64)> = Vec::with_capacity(cuts_x.len() + U_SPLITS.len() + 2);
        nodes.push((0.0, 0.0));
        nodes.push((1.0, 1.0));
        for &x in cuts_x {
            let u = fnr.cdf_raw(x);
            if u.is_nan() {
                return Err(Error::numeric("FNR CDF failed inside the substitution"));
            }
            nodes.push((u, x));
        }
        for (i, &u) in U_SPLITS.iter().enumerate() {
            nodes.push((u, self.fnr_usplit_x[i]));
        }
        nodes.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        nodes.dedup_by(|a, b| (a.0 - b.0).abs() <= 1e-14);

        let n_pieces = (nodes.len() - 1).max(1);
        let piece_spec = QuadratureSpec {
            abs_tol: self.quadrature.abs_tol / n_pieces as f64,
            max_subdivisions: self.quadrature.max_subdivisions,
        };
        let mut total = 0.0;
        for w in nodes.windows(2) {
            let (u_a, x_a) = w[0];
            let (u_b, x_b) = w[1];
            if u_b - u_a <= 1e-14 {
                continue;
            }
            let span = u_b - u_a;
            let integrand = |u: f64| {
                // Linear interpolation of x across the piece as the Newton
                // starting point for the inverse CDF.
                let t = (u - u_a) / span;
                let guess = x_a + t * (x_b - x_a);
                let x = special::betainc_inv_from(u, fnr.alpha, fnr.beta, guess);
                if x.is_nan() {
                    return f64::NAN; // surfaces as a numeric failure
                }
                self.slice_mass(x, eps)
            };
            total += adaptive_integrate(integrand, u_a, u_b, &[], &piece_spec)?;
        }
        Ok(total)
    }

    /// Continuous density of ε̂ at `eps` > 0, by the boundary line
    /// integral: differentiating F(ε) under the integral sign leaves, on
    /// each x-segment, the FPR density at the moving boundary times the
    /// boundary's velocity in ε — branch by branch:
    ///
    /// ```text
    ///   lower steep   1−δ−e^ε x   : f(y_lo) · e^ε x
    ///   lower gentle  (1−δ−x)e^{−ε}: f(y_lo) · y_lo
    ///   upper gentle  1+(δ−x)e^{−ε}: f(y_hi) · (1−y_hi)
    ///   upper steep   δ+e^ε(1−x)  : f(y_hi) · (y_hi−δ)
    /// ```
    ///
    /// Flat pieces (y_lo = 0 or y_hi = 1) do not move and contribute 0.
    pub fn pdf(&self, eps: f64) -> Result<f64> {
        if !eps.is_finite() || eps <= 0.0 {
            return Err(Error::domain(format!(
                "epsilon_pdf requires finite eps > 0, got {eps}"
            )));
        }
        if self.delta >= 1.0 {
            return Ok(0.0);
        }
        if eps > 700.0 {
            return Ok(0.0);
        }
        let delta = self.delta;
        let ee = eps.exp();
        let eneg = (-eps).exp();
        let fx = &self.canon.fnr;
        let fy = &self.canon.fpr;

        let mut cuts = self.integrand_cuts_x(eps);
        cuts.insert(0, 0.0);
        cuts.push(1.0);

        #[derive(PartialEq, Clone, Copy)]
        enum Lo {
            Flat,
            Steep,
            Gentle,
        }
        #[derive(PartialEq, Clone, Copy)]
        enum Hi {
            Flat,
            Gentle,
            Steep,
        }

        let mut total = 0.0;
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b - a <= 1e-14 {
                continue;
            }
            let m = 0.5 * (a + b);
            // Identify the active branch at the midpoint; branches only
            // switch at the cut points.
            let steep_lo = 1.0 - delta - ee * m;
            let gentle_lo = (1.0 - delta - m) * eneg;
            let lo_branch = if steep_lo <= 0.0 && gentle_lo <= 0.0 {
                Lo::Flat
            } else if steep_lo >= gentle_lo {
                Lo::Steep
            } else {
                Lo::Gentle
            };
            let gentle_hi = 1.0 + (delta - m) * eneg;
            let steep_hi = delta + ee * (1.0 - m);
            let hi_branch = if gentle_hi >= 1.0 && steep_hi >= 1.0 {
                Hi::Flat
            } else if gentle_hi <= steep_hi {
                Hi::Gentle
            } else {
                Hi::Steep
            };
            if lo_branch == Lo::Flat && hi_branch == Hi::Flat {
                continue;
            }
            let integrand = |x: f64| {
                let mut v = 0.0;
                match lo_branch {
                    Lo::Flat => {}
                    Lo::Steep => {
                        let y = 1.0 - delta - ee * x;
                        if y > 0.0 && y < 1.0 {
                            v += fy.pdf(y) * ee * x;
                        }
                    }
                    Lo::Gentle => {
                        let y = (1.0 - delta - x) * eneg;
                        if y > 0.0 && y < 1.0 {
                            v += fy.pdf(y) * y;
                        }
                    }
                }
                match hi_branch {
                    Hi::Flat => {}
                    Hi::Gentle => {
                        let y = 1.0 + (delta - x) * eneg;
                        if y > 0.0 && y < 1.0 {
                            v += fy.pdf(y) * (1.0 - y);
                        }
                    }
                    Hi::Steep => {
                        let y = delta + ee * (1.0 - x);
                        if y > 0.0 && y < 1.0 {
                            v += fy.pdf(y) * (y - delta);
                        }
                    }
                }
                fx.pdf(x) * v
            };
            total += tanh_sinh(integrand, a, b, self.quadrature.abs_tol)?;
        }
        Ok(total.max(0.0))
    }

    /// Quantile of ε̂ at level `q` with the default search cap.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        self.quantile_with_cap(q, DEFAULT_EPS_CAP)
    }

    /// Quantile inf{ε : cdf(ε) ≥ q}, bracketed by doubling from ε = 1 and
    /// bisected to 1e-6 absolute. Returns `f64::INFINITY` — an unbounded
    /// result, not an error — when the CDF stays below `q` up to `cap`.
    pub fn quantile_with_cap(&self, q: f64, cap: f64) -> Result<f64> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::domain(format!(
                "quantile level must lie in (0, 1), got {q}"
            )));
        }
        if cap <= 0.0 || cap.is_nan() {
            return Err(Error::domain(format!(
                "quantile cap must be positive, got {cap}"
            )));
        }
        if self.point_mass_at_zero >= q {
            return Ok(0.0);
        }
        let mut lo = 0.0_f64;
        let mut hi = 1.0_f64.min(cap);
        loop {
            if self.cdf(hi)? >= q {
                break;
            }
            if hi >= cap {
                return Ok(f64::INFINITY);
            }
            lo = hi;
            hi = (hi * 2.0).min(cap);
        }
        while hi - lo > QUANTILE_EPS_TOL {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid)? >= q {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// CDF of the ε̂ posterior at `eps` (free-function form of
/// [`EpsilonDistribution::cdf`]).
pub fn epsilon_cdf(dist: &EpsilonDistribution, eps: f64) -> Result<f64> {
    dist.cdf(eps)
}

/// Continuous density of the ε̂ posterior at `eps` > 0.
pub fn epsilon_pdf(dist: &EpsilonDistribution, eps: f64) -> Result<f64> {
    dist.pdf(eps)
}

/// Quantile of the ε̂ posterior at level `q`.
pub fn epsilon_quantile(dist: &EpsilonDistribution, q: f64) -> Result<f64> {
    dist.quantile(q)
}

/// Equal-tailed Bayesian credible interval for ε̂ at level `alpha`:
/// [quantile(α/2), quantile(1−α/2)] of the posterior induced by `tally`
/// under `prior`.
pub fn credible_interval(
    tally: &ConfusionTally,
    delta: f64,
    alpha: f64,
    prior: &BetaPosterior,
) -> Result<EpsilonInterval> {
    credible_interval_with_cap(tally, delta, alpha, prior, DEFAULT_EPS_CAP)
}

/// [`credible_interval`] with an explicit quantile search cap.
pub fn credible_interval_with_cap(
    tally: &ConfusionTally,
    delta: f64,
    alpha: f64,
    prior: &BetaPosterior,
    cap: f64,
) -> Result<EpsilonInterval> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    let joint = joint_posterior(tally, prior)?;
    let dist = EpsilonDistribution::new(joint, delta, QuadratureSpec::default())?;
    let lo = dist.quantile_with_cap(alpha / 2.0, cap)?;
    let hi = dist.quantile_with_cap(1.0 - alpha / 2.0, cap)?;
    Ok(EpsilonInterval {
        lo,
        hi,
        alpha,
        method: IntervalMethod::Bayesian,
    })
}

/// Posterior mass of the rectangle fnr_interval × fpr_interval under the
/// joint rate posterior: the product of the two marginal masses.
pub fn rectangle_mass(
    joint: &JointRatePosterior,
    fnr_interval: &RateInterval,
    fpr_interval: &RateInterval,
) -> Result<f64> {
    let mass = |p: &BetaPosterior, iv: &RateInterval| -> Result<f64> {
        Ok((p.cdf(iv.hi)? - p.cdf(iv.lo)?).max(0.0))
    };
    Ok(mass(&joint.fnr, fnr_interval)? * mass(&joint.fpr, fpr_interval)?)
}

/// Posterior mass of the ε̂ law between two ε values: cdf(hi) − cdf(lo).
/// Geometrically, the mass of the annulus R(ε_hi, δ) ∖ R(ε_lo, δ).
pub fn ring_mass(dist: &EpsilonDistribution, eps_lo: f64, eps_hi: f64) -> Result<f64> {
    if eps_lo.is_nan() || eps_hi.is_nan() || eps_lo < 0.0 || eps_lo > eps_hi {
        return Err(Error::domain(format!(
            "ring_mass requires 0 <= eps_lo <= eps_hi, got [{eps_lo}, {eps_hi}]"
        )));
    }
    Ok((dist.cdf(eps_hi)? - dist.cdf(eps_lo)?).max(0.0))
}

fn family_interval(
    family: CiFamily,
    k: u64,
    n: u64,
    per_rate_alpha: f64,
    sidedness: Sidedness,
) -> Result<RateInterval> {
    match family {
        CiFamily::ClopperPearson => clopper_pearson_interval(k, n, per_rate_alpha, sidedness),
        CiFamily::Jeffreys => jeffreys_interval(k, n, per_rate_alpha, sidedness),
    }
}

fn require_both_classes(tally: &ConfusionTally) -> Result<()> {
    if tally.positives() == 0 || tally.negatives() == 0 {
        return Err(Error::degenerate(format!(
            "CI-derived estimates need trials in both classes (positives={}, negatives={})",
            tally.positives(),
            tally.negatives()
        )));
    }
    Ok(())
}

/// Lower endpoint of a CI-derived estimate: the minimum of the pointwise
/// bound over the rate rectangle.
///
/// The bound vanishes exactly on the band |fnr + fpr − 1| ≤ δ, so any
/// rectangle meeting the band has minimum 0. A rectangle entirely on the
/// better-than-chance side minimizes at its upper-rate corner (the
/// competing terms decrease in both rates there); entirely on the
/// worse-than-chance side, at its lower-rate corner. Finite edge
/// conventions on the rectangle's rate-0 (respectively rate-1) edges also
/// compete.
fn rectangle_min(fnr_iv: &RateInterval, fpr_iv: &RateInterval, delta: f64) -> f64 {
    let lo_edge = 1.0 - delta;
    if fnr_iv.lo + fpr_iv.lo <= 1.0 + delta && fnr_iv.hi + fpr_iv.hi >= lo_edge {
        return 0.0;
    }
    if fnr_iv.hi + fpr_iv.hi < lo_edge {
        let mut best = epsilon_lower_bound_point(fnr_iv.hi, fpr_iv.hi, delta);
        if fpr_iv.lo == 0.0 {
            best = best.min((lo_edge / fnr_iv.hi).ln().max(0.0));
        }
        if fnr_iv.lo == 0.0 {
            best = best.min((lo_edge / fpr_iv.hi).ln().max(0.0));
        }
        best
    } else {
        let mut best = epsilon_lower_bound_point(fnr_iv.lo, fpr_iv.lo, delta);
        if fpr_iv.hi == 1.0 {
            best = best.min((lo_edge / (1.0 - fnr_iv.lo)).ln().max(0.0));
        }
        if fnr_iv.hi == 1.0 {
            best = best.min((lo_edge / (1.0 - fpr_iv.lo)).ln().max(0.0));
        }
        best
    }
}

/// Upper endpoint of a CI-derived estimate: the supremum of the pointwise
/// bound over the rate rectangle. The better-than-chance terms are maximal
/// at the lower-rate corner and the worse-than-chance terms at the
/// upper-rate corner, so the finite supremum is the larger of the two
/// corner values. The supremum diverges when a rate's limit touches the
/// edge where a competing term's denominator vanishes: lower limit 0 while
/// the other lower limit stays below 1−δ, or upper limit 1 while the other
/// upper limit exceeds δ.
fn rectangle_max(fnr_iv: &RateInterval, fpr_iv: &RateInterval, delta: f64) -> f64 {
    let lo_edge = 1.0 - delta;
    if fnr_iv.lo == 0.0 && fpr_iv.lo == 0.0 {
        return f64::INFINITY;
    }
    if fpr_iv.lo == 0.0 && fnr_iv.lo < lo_edge {
        return f64::INFINITY;
    }
    if fnr_iv.lo == 0.0 && fpr_iv.lo < lo_edge {
        return f64::INFINITY;
    }
    if fnr_iv.hi == 1.0 && fpr_iv.hi == 1.0 {
        return f64::INFINITY;
    }
    if fpr_iv.hi == 1.0 && fnr_iv.hi > delta {
        return f64::INFINITY;
    }
    if fnr_iv.hi == 1.0 && fpr_iv.hi > delta {
        return f64::INFINITY;
    }
    epsilon_lower_bound_point(fnr_iv.lo, fpr_iv.lo, delta)
        .max(epsilon_lower_bound_point(fnr_iv.hi, fpr_iv.hi, delta))
}

/// Confidence-interval-derived ε interval: per-rate two-sided intervals at
/// per_rate_alpha = α/2 (the union-bound convention), then the pointwise
/// bound extremized over the resulting rate rectangle with the zero-edge
/// conventions of [`epsilon_lower_bound_point`].
pub fn ci_epsilon_interval(
    tally: &ConfusionTally,
    delta: f64,
    alpha: f64,
    family: CiFamily,
) -> Result<EpsilonInterval> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::domain(format!(
            "delta must lie in [0, 1], got {delta}"
        )));
    }
    require_both_classes(tally)?;
    let per_rate = alpha / 2.0;
    let fnr_iv = family_interval(
        family,
        tally.false_neg,
        tally.positives(),
        per_rate,
        Sidedness::TwoSided,
    )?;
    let fpr_iv = family_interval(
        family,
        tally.false_pos,
        tally.negatives(),
        per_rate,
        Sidedness::TwoSided,
    )?;
    let lo = rectangle_min(&fnr_iv, &fpr_iv, delta);
    let hi = rectangle_max(&fnr_iv, &fpr_iv, delta);
    Ok(EpsilonInterval {
        lo,
        hi: hi.max(lo),
        alpha,
        method: match family {
            CiFamily::ClopperPearson => IntervalMethod::ClopperPearsonCi,
            CiFamily::Jeffreys => IntervalMethod::JeffreysCi,
        },
    })
}

/// One-sided CI-derived lower bound for ε: per-rate *upper* one-sided
/// intervals at per_rate_alpha = α/2, then the minimum of the pointwise
/// bound over the rectangle [0, fnr_hi] × [0, fpr_hi] — the corner value
/// against the two zero-edge convention values.
pub fn ci_epsilon_lower_bound(
    tally: &ConfusionTally,
    delta: f64,
    alpha: f64,
    family: CiFamily,
) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::domain(format!(
            "delta must lie in [0, 1], got {delta}"
        )));
    }
    require_both_classes(tally)?;
    let per_rate = alpha / 2.0;
    let fnr_iv = family_interval(
        family,
        tally.false_neg,
        tally.positives(),
        per_rate,
        Sidedness::UpperOneSided,
    )?;
    let fpr_iv = family_interval(
        family,
        tally.false_pos,
        tally.negatives(),
        per_rate,
        Sidedness::UpperOneSided,
    )?;
    Ok(rectangle_min(&fnr_iv, &fpr_iv, delta))
}

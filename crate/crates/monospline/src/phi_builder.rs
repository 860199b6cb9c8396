//! The `C¹` smoothing functions that replace a kink function near its knot.
//!
//! Given three smoothing knots `left < mid < right` and the kink triple
//! `x_j < x_{j-1} < x_{j-2}`, the function
//!
//! ```text
//! φ(x) = α (x-left)₊³ + β (x-mid)₊³ + γ (x-mid)₊² + (1-α-β) (x-right)₊³
//! ```
//!
//! vanishes (with its derivative) left of `left` and coincides with
//! `Ψ₃(·, x_j)` for `x ≥ right`. The closed forms for `α`, `β` are exactly
//! the two conditions that cancel every `(x-·)¹` and `(x-·)⁰` coefficient in
//! the truncated-power expansion; `γ` then matches the quadratic coefficient.
//! All four truncated terms have power ≥ 2, so `φ ∈ C¹` by construction.

use crate::error::{Error, Result};
use crate::trunc_spline::TruncatedPowerSpline;

/// Closed-form smoothing coefficients with their geometric inputs.
#[derive(Debug, Clone, Copy)]
pub struct PhiCoefficients {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Knot gaps `(mid - left, right - mid)`.
    pub gaps: (f64, f64),
    /// Elementary symmetric functions of `right - x_j`, `right - x_{j-1}`,
    /// `right - x_{j-2}`.
    pub sym: (f64, f64, f64),
}

/// Computes `α`, `β`, `γ` for smoothing knots `(left, mid, right)` and the
/// kink triple `(xj, xjm1, xjm2)` with `xj < xjm1 < xjm2`.
pub fn phi_coefficients(
    left: f64,
    mid: f64,
    right: f64,
    xj: f64,
    xjm1: f64,
    xjm2: f64,
) -> Result<PhiCoefficients> {
    let g1 = mid - left;
    let g2 = right - mid;
    if !(g1 > 0.0 && g2 > 0.0) {
        return Err(Error::invalid(format!(
            "smoothing knots must be strictly ascending: {left}, {mid}, {right}"
        )));
    }
    if !(xj < xjm1 && xjm1 < xjm2) {
        return Err(Error::invalid(
            "kink triple must be strictly ascending (descending partition indices)",
        ));
    }
    let (r0, r1, r2) = (right - xj, right - xjm1, right - xjm2);
    let s1 = r0 + r1 + r2;
    let s2 = r0 * r1 + r0 * r2 + r1 * r2;
    let s3 = r0 * r1 * r2;

    let alpha = (s1 * g2 * g2 - 2.0 * s2 * g2 + 3.0 * s3) / (3.0 * g1 * g1 * (g1 + g2));
    let beta = (s1 * g2 * (g1 + g2) * (2.0 * g1 - g2)
        - s2 * (g1 * g1 - 2.0 * g2 * g2 + 2.0 * g1 * g2)
        - 3.0 * s3 * (g2 - g1))
        / (3.0 * g1 * g1 * g2 * g2);
    let gamma = s1 - 3.0 * alpha * (g1 + g2) - 3.0 * beta * g2;

    Ok(PhiCoefficients {
        alpha,
        beta,
        gamma,
        gaps: (g1, g2),
        sym: (s1, s2, s3),
    })
}

/// Assembles the smoothing spline from its coefficients on the given domain.
/// The result is `C¹`-certified structurally (every term has power ≥ 2).
pub fn build_phi(
    c: &PhiCoefficients,
    left: f64,
    mid: f64,
    right: f64,
    domain: (f64, f64),
) -> Result<TruncatedPowerSpline> {
    let mut s = TruncatedPowerSpline::zero(domain)?;
    s.push_term(left, 3, c.alpha)?;
    s.push_term(mid, 3, c.beta)?;
    s.push_term(mid, 2, c.gamma)?;
    s.push_term(right, 3, 1.0 - c.alpha - c.beta)?;
    Ok(s)
}

/// Sup over a uniform grid of `|psi - phi|` on the modified interval.
pub fn phi_deviation(
    phi: &TruncatedPowerSpline,
    psi: &TruncatedPowerSpline,
    interval: (f64, f64),
    grid: usize,
) -> f64 {
    assert!(grid >= 64, "phi_deviation needs grid >= 64");
    let (lo, hi) = interval;
    let mut sup = 0.0f64;
    for i in 0..=grid {
        let x = lo + (hi - lo) * i as f64 / grid as f64;
        sup = sup.max((psi.eval_unchecked(x) - phi.eval_unchecked(x)).abs());
    }
    sup
}

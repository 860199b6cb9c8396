//! Independent oracles: brute-force moduli of smoothness, exact
//! 3-monotonicity certification of cubic splines, divided-difference
//! inequality checks, and randomized 3-monotonicity screening of input
//! functions.
//!
//! The modulus is computed by plain grid brute force on purpose: it is the
//! trusted quantity every error bound in this crate is measured against, so
//! it must not share machinery with anything it judges.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::divdiff::{divided_difference, NodeValueSet};
use crate::error::{Error, Result};
use crate::trunc_spline::TruncatedPowerSpline;

/// Default grid for modulus estimation: steps in `u`, shift positions in `x`.
pub const MODULUS_GRID: (usize, usize) = (64, 512);

/// Brute-force estimate of a k-th modulus of smoothness with its grid
/// metadata.
#[derive(Debug, Clone)]
pub struct ModulusEstimate {
    pub k: usize,
    pub t: f64,
    pub interval: (f64, f64),
    pub value: f64,
    /// `(u_steps, x_shifts)` used for the sup.
    pub grid: (usize, usize),
}

/// `ω_k(f, t, [lo, hi])`: sup over steps `0 < u ≤ t` (clamped so the window
/// fits) and positions `x` with `x, x + k·u ∈ [lo, hi]` of the k-th forward
/// difference's absolute value, on the default grid.
pub fn modulus(f: impl Fn(f64) -> f64, k: usize, t: f64, interval: (f64, f64)) -> ModulusEstimate {
    modulus_with_grid(f, k, t, interval, MODULUS_GRID)
}

pub fn modulus_with_grid(
    f: impl Fn(f64) -> f64,
    k: usize,
    t: f64,
    interval: (f64, f64),
    grid: (usize, usize),
) -> ModulusEstimate {
    assert!(k >= 1, "modulus order must be at least 1");
    let (lo, hi) = interval;
    assert!(lo < hi, "modulus interval must be nondegenerate");
    let (u_steps, x_shifts) = grid;

    let u_max = t.min((hi - lo) / k as f64);
    let mut value = 0.0f64;
    if u_max > 0.0 {
        let binom = binomials(k);
        for m in 1..=u_steps {
            let u = u_max * m as f64 / u_steps as f64;
            let room = hi - lo - k as f64 * u;
            let positions = if room > 0.0 { x_shifts } else { 1 };
            for r in 0..positions {
                let x = if positions == 1 {
                    lo
                } else {
                    lo + room * r as f64 / (positions - 1) as f64
                };
                let mut diff = 0.0;
                for (i, &c) in binom.iter().enumerate() {
                    let sign = if (k - i).is_multiple_of(2) { 1.0 } else { -1.0 };
                    diff += sign * c * f(x + i as f64 * u);
                }
                value = value.max(diff.abs());
            }
        }
    }
    ModulusEstimate {
        k,
        t,
        interval,
        value,
        grid,
    }
}

fn binomials(k: usize) -> Vec<f64> {
    let mut c = vec![1.0f64];
    for _ in 0..k {
        let mut next = vec![1.0];
        for i in 1..c.len() {
            next.push(c[i - 1] + c[i]);
        }
        next.push(1.0);
        c = next;
    }
    c
}

/// Outcome of the exact second-derivative analysis of a cubic spline.
#[derive(Debug, Clone)]
pub struct MonotonicityReport {
    pub pass: bool,
    /// `(knot, s'' left limit, s'' right limit)` at the most negative jump.
    pub worst_jump: Option<(f64, f64, f64)>,
    /// `((piece lo, piece hi), s''' on the piece)` at the most negative slope.
    pub worst_slope: Option<((f64, f64), f64)>,
    pub tol: f64,
    /// `max(1, ‖s''‖∞ over knots)`; tolerances are relative to this.
    pub scale: f64,
}

/// Certifies `s'' nondecreasing by exact per-piece analysis: the jump sign at
/// every knot and the (piecewise-constant) third derivative on every piece.
/// No sampling is involved; a cubic's `s''` is piecewise linear.
pub fn check_3monotone_spline(s: &TruncatedPowerSpline, tol: f64) -> MonotonicityReport {
    let (a, b) = s.domain();
    let d2 = s.derivative(2);
    let d3 = s.derivative(3);

    let mut knots: Vec<f64> = d2.knots().into_iter().filter(|&k| k > a && k < b).collect();
    knots.dedup();

    let mut scale = d2.eval_right(a).abs().max(d2.eval_left(b).abs());
    for &k in &knots {
        scale = scale.max(d2.eval_left(k).abs()).max(d2.eval_right(k).abs());
    }
    let scale = scale.max(1.0);

    let mut worst_jump: Option<(f64, f64, f64)> = None;
    for &k in &knots {
        let left = d2.eval_left(k);
        let right = d2.eval_right(k);
        if worst_jump.is_none_or(|(_, l, r)| right - left < r - l) {
            worst_jump = Some((k, left, right));
        }
    }

    let mut cuts = vec![a];
    cuts.extend_from_slice(&knots);
    cuts.push(b);
    let mut worst_slope: Option<((f64, f64), f64)> = None;
    for w in cuts.windows(2) {
        // s''' is constant on the open piece, so the midpoint value is exact
        let slope = d3.eval_right(0.5 * (w[0] + w[1]));
        if worst_slope.is_none_or(|(_, s0)| slope < s0) {
            worst_slope = Some(((w[0], w[1]), slope));
        }
    }

    let jump_ok = worst_jump.is_none_or(|(_, l, r)| r - l >= -tol * scale);
    let slope_ok = worst_slope.is_none_or(|(_, sl)| sl >= -tol * scale);
    MonotonicityReport {
        pass: jump_ok && slope_ok,
        worst_jump,
        worst_slope,
        tol,
        scale,
    }
}

/// Randomized necessary-condition screen: draws `samples` quadruples of
/// distinct points in the interval and checks the third divided difference
/// is nonnegative. Deterministic for a fixed seed.
pub fn check_function_3monotone(
    f: impl Fn(f64) -> f64,
    interval: (f64, f64),
    samples: usize,
    seed: u64,
) -> bool {
    assert!(samples >= 4, "need at least 4 sample quadruples");
    let (lo, hi) = interval;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let min_sep = 1e-6 * (hi - lo);
    'outer: for _ in 0..samples {
        let mut pts = [0.0f64; 4];
        for p in &mut pts {
            *p = rng.random_range(lo..hi);
        }
        pts.sort_by(f64::total_cmp);
        if pts.windows(2).any(|w| w[1] - w[0] < min_sep) {
            continue 'outer; // redraw implicitly; near-coincident quadruples amplify rounding
        }
        let nv = match NodeValueSet::from_fn(pts.to_vec(), &f) {
            Ok(nv) => nv,
            Err(_) => return false,
        };
        let span = pts[3] - pts[0];
        // third differences scale like f''' / 6; tolerate rounding amplified
        // by the node geometry
        let tol = 1e-9 / (span * span * span).min(1.0);
        if divided_difference(&nv) < -tol {
            return false;
        }
    }
    true
}

/// Quantities of the two divided-difference inequalities over a six-point
/// window, in the descending-index naming (`x₅ < ... < x₀`).
#[derive(Debug, Clone)]
pub struct WindowInequalityOutcome {
    /// `(x₁-x₄)(x₂-x₃)·Δ₄` — the bracketed middle difference.
    pub lhs: f64,
    /// `A = (x₂-x₅)(x₃-x₄)Δ₅ + (x₀-x₃)(x₁-x₂)Δ₃`.
    pub a: f64,
    /// `B = sqrt((x₂-x₅)(x₂-x₄)Δ₅ · (x₀-x₃)(x₁-x₃)Δ₃)`.
    pub b: f64,
    /// Whether `lhs ≤ A + 2B`.
    pub upper_holds: bool,
    /// `A + 2B - lhs`.
    pub upper_slack: f64,
    /// Lower-bound chain, present only when the center dominates both
    /// neighbors (`Δ₅ ≤ Δ₄ ≥ Δ₃`).
    pub lower: Option<WindowLowerBound>,
    /// `[Δ₅, Δ₄, Δ₃]`.
    pub deltas: [f64; 3],
}

#[derive(Debug, Clone)]
pub struct WindowLowerBound {
    pub c: f64,
    pub d: f64,
    /// `lhs ≥ max{C, D}`.
    pub ok_upper: bool,
    /// `max{C, D} ≥ A - 2B`.
    pub ok_chain: bool,
    pub slack: f64,
}

impl WindowInequalityOutcome {
    pub fn all_hold(&self) -> bool {
        self.upper_holds && self.lower.as_ref().is_none_or(|l| l.ok_upper && l.ok_chain)
    }
}

/// Checks the window inequalities bounding the middle third divided
/// difference by its neighbors. Intended for 3-monotone `f`; the caller
/// screens inputs via [`check_function_3monotone`]. The lower bound is only
/// meaningful on equidistant (or validated almost-equidistant) windows.
pub fn window_inequality_check(
    f: impl Fn(f64) -> f64,
    points_ascending: &[f64; 6],
) -> Result<WindowInequalityOutcome> {
    if points_ascending.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("window points must be strictly ascending"));
    }
    // descending naming: x[0] = x₀ is the largest point
    let x = |i: usize| points_ascending[5 - i];
    let third = |hi: usize| -> Result<f64> {
        // Δ_j over x_j, x_{j-1}, x_{j-2}, x_{j-3} with j = hi
        let nodes = vec![x(hi), x(hi - 1), x(hi - 2), x(hi - 3)];
        Ok(divided_difference(&NodeValueSet::from_fn(nodes, &f)?))
    };
    let d5 = third(5)?;
    let d4 = third(4)?;
    let d3 = third(3)?;

    let lhs = (x(1) - x(4)) * (x(2) - x(3)) * d4;
    let a = (x(2) - x(5)) * (x(3) - x(4)) * d5 + (x(0) - x(3)) * (x(1) - x(2)) * d3;
    let b_sq = (x(2) - x(5)) * (x(2) - x(4)) * d5 * (x(0) - x(3)) * (x(1) - x(3)) * d3;
    let b = b_sq.max(0.0).sqrt();

    // The divided-difference tables carry rounding of order ε·|f|/gap³, and
    // every term multiplies one by two spans; windows where the inequality is
    // tight sit exactly at that noise level, so the tolerance models it.
    let f_scale = (0..6)
        .map(|i| points_ascending[i])
        .map(&f)
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let span = points_ascending[5] - points_ascending[0];
    let min_gap = points_ascending
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::MAX, f64::min);
    let rounding = 64.0 * f64::EPSILON * f_scale * span * span / (min_gap * min_gap * min_gap);

    let scale = lhs.abs().max(a.abs()).max(2.0 * b).max(1e-30);
    let tol = 1e-9 * scale + rounding;
    let upper_slack = a + 2.0 * b - lhs;
    let upper_holds = upper_slack >= -tol;

    let lower = if d5 <= d4 && d4 >= d3 {
        let c = (x(0) - x(3)) * (x(1) - x(2)) * d3
            - (x(2) - x(5)) * ((x(2) - x(4)) + (x(2) - x(3))) * d5;
        let d = (x(2) - x(5)) * (x(3) - x(4)) * d5
            - (x(0) - x(3)) * ((x(2) - x(3)) + (x(1) - x(3))) * d3;
        let m = c.max(d);
        Some(WindowLowerBound {
            c,
            d,
            ok_upper: lhs - m >= -tol,
            ok_chain: m - (a - 2.0 * b) >= -tol,
            slack: lhs - m,
        })
    } else {
        None
    };

    Ok(WindowInequalityOutcome {
        lhs,
        a,
        b,
        upper_holds,
        upper_slack,
        lower,
        deltas: [d5, d4, d3],
    })
}

/// Fuzzes the window inequalities over random equidistant six-point windows
/// inside `interval`. Returns `(violations, minimum slack seen)`.
pub fn window_inequality_fuzz(
    f: impl Fn(f64) -> f64,
    interval: (f64, f64),
    trials: usize,
    seed: u64,
) -> Result<(usize, f64)> {
    let (lo, hi) = interval;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0usize;
    let mut min_slack = f64::INFINITY;
    for _ in 0..trials {
        let u = rng.random_range(1e-3..(hi - lo) / 5.0);
        let start = rng.random_range(lo..hi - 5.0 * u);
        let pts = [
            start,
            start + u,
            start + 2.0 * u,
            start + 3.0 * u,
            start + 4.0 * u,
            start + 5.0 * u,
        ];
        let out = window_inequality_check(&f, &pts)?;
        if !out.all_hold() {
            violations += 1;
        }
        min_slack = min_slack.min(out.upper_slack);
        if let Some(l) = &out.lower {
            min_slack = min_slack.min(l.slack);
        }
    }
    Ok((violations, min_slack))
}

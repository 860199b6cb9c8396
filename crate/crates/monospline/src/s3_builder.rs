//! The unconstrained interpolatory cubic spline in its three equivalent
//! representations, with its per-interval error report.
//!
//! On `[x_j, x_{j-1})` the spline equals the Lagrange cubic through
//! `x_j, ..., x_{j-3}`; the three rightmost intervals share the cubic through
//! `x_3, ..., x_0`. Equivalently it is a base cubic (or quadratic) plus kink
//! functions weighted by fourth (or third) divided differences. The spline
//! interpolates `f` at every partition point and is accurate to
//! `ω₄(f, h_j, [x_j, x_{j-3}])` per interval, but it is only continuous —
//! not `C¹` — and it does not preserve 3-monotonicity.

use crate::divdiff::{fourth_diff, interpolant_power_basis, third_diff, NodeValueSet};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::trunc_spline::{PiecewisePoly, TruncatedPowerSpline};
use crate::verify;

/// The interpolatory spline in all three forms. The invariant that all three
/// agree pointwise is exercised by the tests and the acceptance suite.
#[derive(Debug, Clone)]
pub struct S3Spline {
    /// Direct piecewise-Lagrange construction.
    pub piecewise: PiecewisePoly,
    /// Base `L₃(x; x_n; f)` plus kink functions weighted by fourth divided
    /// differences times window spans.
    pub fourth_diff_form: TruncatedPowerSpline,
    /// Base `L₂(x; x_n; f)` plus kink-function differences weighted by third
    /// divided differences.
    pub third_diff_form: TruncatedPowerSpline,
}

/// One row of the per-interval error report.
#[derive(Debug, Clone)]
pub struct IntervalErrorRow {
    pub j: usize,
    pub x_j: f64,
    pub sup_error: f64,
    pub omega4: f64,
    /// `sup_error / omega4`, with 0/0 reported as 0.
    pub ratio: f64,
}

/// `sup / omega` with the 0/0 case reported as 0: a numerically-zero modulus
/// (polynomial input) must pair with a numerically-zero error.
pub(crate) fn ratio_or_zero(sup: f64, omega: f64) -> f64 {
    if omega <= 1e-12 {
        if sup <= 1e-10 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        sup / omega
    }
}

fn window_values(
    f: &impl Fn(f64) -> f64,
    p: &Partition,
    hi: usize,
    count: usize,
) -> Result<NodeValueSet> {
    let nodes: Vec<f64> = (0..count).map(|k| p.x(hi - k)).collect();
    NodeValueSet::from_fn(nodes, f)
}

/// Builds the interpolatory spline. Needs `n ≥ 3`.
pub fn build_s3(f: impl Fn(f64) -> f64, p: &Partition) -> Result<S3Spline> {
    let n = p.n();
    if n < 3 {
        return Err(Error::invalid("interpolatory spline needs n >= 3"));
    }
    let domain = (p.a(), p.b());

    // direct piecewise form: intervals indexed descending, assembled ascending
    let mut breaks: Vec<f64> = (3..=n).rev().map(|j| p.x(j)).collect();
    breaks.push(p.x(0));
    let mut coefs = Vec::with_capacity(breaks.len() - 1);
    for j in (4..=n).rev() {
        coefs.push(interpolant_power_basis(&window_values(&f, p, j, 4)?));
    }
    coefs.push(interpolant_power_basis(&window_values(&f, p, 3, 4)?));
    let piecewise = PiecewisePoly::new(breaks, coefs)?;

    // truncated-power form over fourth differences
    let mut fourth_diff_form = TruncatedPowerSpline::new(
        domain,
        interpolant_power_basis(&window_values(&f, p, n, 4)?),
    )?;
    for j in 3..n {
        let weight = fourth_diff(&f, p, j) * (p.x(j - 3) - p.x(j + 1));
        fourth_diff_form.push_psi_product([p.x(j), p.x(j - 1), p.x(j - 2)], weight)?;
    }
    fourth_diff_form.consolidate();

    // truncated-power form over third differences
    let mut third_diff_form = TruncatedPowerSpline::new(
        domain,
        interpolant_power_basis(&window_values(&f, p, n, 3)?),
    )?;
    for j in 3..=n {
        let d = third_diff(&f, p, j);
        third_diff_form.push_psi_product([p.x(j), p.x(j - 1), p.x(j - 2)], d)?;
        if j > 3 {
            third_diff_form.push_psi_product([p.x(j - 1), p.x(j - 2), p.x(j - 3)], -d)?;
        }
    }
    third_diff_form.consolidate();

    Ok(S3Spline {
        piecewise,
        fourth_diff_form,
        third_diff_form,
    })
}

/// Per-interval sup error against the clamped four-interval modulus window
/// `[x_j, x_{j-3}]` (indices below 0 clamp to `b`).
pub fn s3_error_report(
    f: impl Fn(f64) -> f64,
    p: &Partition,
    grid: usize,
) -> Result<Vec<IntervalErrorRow>> {
    if grid < 32 {
        return Err(Error::invalid("error report needs grid >= 32 per interval"));
    }
    let s = build_s3(&f, p)?;
    let mut rows = Vec::with_capacity(p.n());
    for j in 1..=p.n() {
        let (lo, hi) = p.interval(j);
        let mut sup = 0.0f64;
        for i in 0..=grid {
            let x = lo + (hi - lo) * i as f64 / grid as f64;
            let v = f(x);
            if !v.is_finite() {
                return Err(Error::NonFinite(x));
            }
            sup = sup.max((v - s.piecewise.eval_unchecked(x)).abs());
        }
        let win = (p.x(j), p.clamped(j as i64 - 3));
        let omega = verify::modulus(&f, 4, p.h(j), win).value;
        rows.push(IntervalErrorRow {
            j,
            x_j: p.x(j),
            sup_error: sup,
            omega4: omega,
            ratio: ratio_or_zero(sup, omega),
        });
    }
    Ok(rows)
}

/// CSV rendering of the report: `j, x_j, sup_error, omega4, ratio`.
pub fn report_to_csv(rows: &[IntervalErrorRow]) -> String {
    let mut out = String::from("j,x_j,sup_error,omega4,ratio\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.j,
            crate::cli::fmt_float(r.x_j),
            crate::cli::fmt_float(r.sup_error),
            crate::cli::fmt_float(r.omega4),
            crate::cli::fmt_float(r.ratio),
        ));
    }
    out
}

//! Assembly of the 3-monotone spline from smoothed kink functions.
//!
//! Every working index `j` receives a `C¹` piece `Ψ_j`: a smoothing of the
//! kink function `Ψ₃(·, x_j)` whose three knots come from the knot plan.
//! Ordinary indices smooth over the knots right (or left) of `x_{j-1}`
//! depending on which neighboring third difference dominates; a peak `j` and
//! its neighbor `j-1` share the triple centered on the relocated knot `d_j`.
//! The spline is the telescoping sum of the pieces weighted by third divided
//! differences; an equivalent form weights each piece by its fourth divided
//! difference times the window span and is kept as a cross-check.
//!
//! Assembly is sequential in ascending `j`, so rebuilding a spline from the
//! same inputs is bit-identical.

use std::collections::BTreeMap;

use serde_json::json;

use crate::divdiff::{interpolant_power_basis, NodeValueSet};
use crate::error::{Error, Result};
use crate::knot_planner::{classify, plan_knots, ClassificationTable, KnotPlan};
use crate::partition::Partition;
use crate::phi_builder::{build_phi, phi_coefficients};
use crate::s3_builder::{ratio_or_zero, IntervalErrorRow};
use crate::trunc_spline::TruncatedPowerSpline;
use crate::verify;

/// Which construction rule produced a piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PieceRule {
    /// Ordinary index, smoothing knots at and right of `x_{j-1}`.
    SmoothRight,
    /// Ordinary index, smoothing knots at and left of `x_{j-1}`.
    SmoothLeft,
    /// Peak index: triple centered on the relocated knot.
    VertexPeak,
    /// Neighbor of a peak: same triple as the peak.
    VertexNeighbor,
    /// The identically-zero boundary piece (`j = 2`).
    ZeroEnd,
    /// The plain cubic product at the left boundary (`j = n`).
    ProductEnd,
}

/// Descriptor of one assembled piece.
#[derive(Debug, Clone)]
pub struct PieceInfo {
    pub rule: PieceRule,
    /// Smoothing knots `(left, mid, right)` for interior pieces.
    pub knots: Option<[f64; 3]>,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// A piece with its spline form.
#[derive(Debug, Clone)]
pub struct Piece {
    pub spline: TruncatedPowerSpline,
    pub info: PieceInfo,
}

/// The constructed 3-monotone spline.
#[derive(Debug, Clone)]
pub struct MonoSpline {
    /// Base `L₃(x; x_n; f)` plus pieces weighted by fourth divided
    /// differences times window spans; derived cross-check form.
    pub fourth_diff_form: TruncatedPowerSpline,
    /// Base `L₂(x; x_n; f)` plus telescoped pieces weighted by third divided
    /// differences; the construction's source of truth.
    pub third_diff_form: TruncatedPowerSpline,
    pub partition: Partition,
    pub plan: KnotPlan,
    pub table: Option<ClassificationTable>,
    pub pieces: BTreeMap<usize, PieceInfo>,
    /// True when `n ≤ 4` and the single interpolating cubic was used.
    pub fallback: bool,
}

/// Coefficient windows every piece must satisfy. Ordinary pieces keep both
/// `α` and `α + β` in `[0, 1]`; the peak pair only stays inside the rough
/// `(-1/2, 3/2)` envelope, one of the two being tight depending on which side
/// of its home interval the vertex sits.
const RANGE_TOL: f64 = 1e-9;

fn check_range(j: usize, what: &str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value < lo - RANGE_TOL || value > hi + RANGE_TOL {
        return Err(Error::admissibility(
            format!("smoothing coefficient {what} = {value} outside [{lo}, {hi}]"),
            j,
        ));
    }
    Ok(())
}

fn check_gamma_sign(j: usize, rising_branch: bool, gamma: f64, scale: f64) -> Result<()> {
    let tol = RANGE_TOL * scale.max(1.0);
    let ok = if rising_branch {
        gamma >= -tol
    } else {
        gamma <= tol
    };
    if !ok {
        return Err(Error::admissibility(
            format!(
                "quadratic coefficient sign violates the jump rule: gamma = {gamma}, \
                 dominant side = {}",
                if rising_branch { "right" } else { "left" }
            ),
            j,
        ));
    }
    Ok(())
}

fn smoothing_piece(
    j: usize,
    rule: PieceRule,
    knots: [f64; 3],
    kink: [f64; 3],
    p: &Partition,
) -> Result<Piece> {
    let c = phi_coefficients(knots[0], knots[1], knots[2], kink[0], kink[1], kink[2])?;
    let (lo, hi) = match rule {
        PieceRule::SmoothRight | PieceRule::SmoothLeft => (0.0, 1.0),
        _ => (-0.5, 1.5),
    };
    check_range(j, "alpha", c.alpha, lo, hi)?;
    check_range(j, "alpha + beta", c.alpha + c.beta, lo, hi)?;
    let rising = matches!(rule, PieceRule::SmoothRight | PieceRule::VertexPeak);
    check_gamma_sign(j, rising, c.gamma, c.sym.0.abs())?;
    let spline = build_phi(&c, knots[0], knots[1], knots[2], (p.a(), p.b()))?;
    Ok(Piece {
        spline,
        info: PieceInfo {
            rule,
            knots: Some(knots),
            alpha: c.alpha,
            beta: c.beta,
            gamma: c.gamma,
        },
    })
}

/// Builds the pieces for `j = 2..=n`, including both boundary cases.
pub fn build_pieces(
    table: &ClassificationTable,
    plan: &KnotPlan,
    p: &Partition,
) -> Result<BTreeMap<usize, Piece>> {
    let n = p.n();
    let mut pieces: BTreeMap<usize, Piece> = BTreeMap::new();

    pieces.insert(
        2,
        Piece {
            spline: TruncatedPowerSpline::zero((p.a(), p.b()))?,
            info: PieceInfo {
                rule: PieceRule::ZeroEnd,
                knots: None,
                alpha: 0.0,
                beta: 0.0,
                gamma: 0.0,
            },
        },
    );

    let y_at = |i: usize| -> Result<f64> {
        if i > plan.k() {
            return Err(Error::Internal(format!(
                "knot index {i} beyond plan size {}",
                plan.k()
            )));
        }
        Ok(plan.y(i))
    };

    for &j in table.smooth_right() {
        let i = plan
            .ordinary_index(j)
            .ok_or_else(|| Error::Internal(format!("missing knot index for j = {j}")))?;
        if i < 2 {
            return Err(Error::Internal(format!(
                "too few knots right of x_{}",
                j - 1
            )));
        }
        let knots = [y_at(i)?, y_at(i - 1)?, y_at(i - 2)?];
        let kink = [p.x(j), p.x(j - 1), p.x(j - 2)];
        pieces.insert(
            j,
            smoothing_piece(j, PieceRule::SmoothRight, knots, kink, p)?,
        );
    }

    for &j in table.smooth_left() {
        let i = plan
            .ordinary_index(j)
            .ok_or_else(|| Error::Internal(format!("missing knot index for j = {j}")))?;
        let knots = [y_at(i + 2)?, y_at(i + 1)?, y_at(i)?];
        let kink = [p.x(j), p.x(j - 1), p.x(j - 2)];
        pieces.insert(
            j,
            smoothing_piece(j, PieceRule::SmoothLeft, knots, kink, p)?,
        );
    }

    for &j in table.peaks() {
        let i = plan
            .vertex_index(j)
            .ok_or_else(|| Error::Internal(format!("missing vertex index for j = {j}")))?;
        if i == 0 || i >= plan.k() {
            return Err(Error::Internal(format!(
                "relocated knot for j = {j} has no neighbors"
            )));
        }
        let knots = [y_at(i + 1)?, y_at(i)?, y_at(i - 1)?];
        // the peak piece smooths Ψ₃(·, x_j); its neighbor smooths
        // Ψ₃(·, x_{j-1}) over the same knots
        pieces.insert(
            j,
            smoothing_piece(
                j,
                PieceRule::VertexPeak,
                knots,
                [p.x(j), p.x(j - 1), p.x(j - 2)],
                p,
            )?,
        );
        pieces.insert(
            j - 1,
            smoothing_piece(
                j - 1,
                PieceRule::VertexNeighbor,
                knots,
                [p.x(j - 1), p.x(j - 2), p.x(j - 3)],
                p,
            )?,
        );
    }

    // plain cubic product at the left boundary: active on the whole domain
    let mut product = TruncatedPowerSpline::zero((p.a(), p.b()))?;
    let mut poly = [1.0, 0.0, 0.0, 0.0];
    for k in [p.x(n), p.x(n - 1), p.x(n - 2)] {
        poly = crate::divdiff::shift_multiply(poly, k);
    }
    product.add_to_base(&poly, 1.0);
    pieces.insert(
        n,
        Piece {
            spline: product,
            info: PieceInfo {
                rule: PieceRule::ProductEnd,
                knots: None,
                alpha: 0.0,
                beta: 0.0,
                gamma: 0.0,
            },
        },
    );

    for j in 3..=n {
        if !pieces.contains_key(&j) {
            return Err(Error::Internal(format!("no piece assembled for j = {j}")));
        }
    }
    Ok(pieces)
}

fn endpoint_values(f: &impl Fn(f64) -> f64, p: &Partition, count: usize) -> Result<NodeValueSet> {
    let n = p.n();
    let nodes: Vec<f64> = (0..count).map(|k| p.x(n - k)).collect();
    NodeValueSet::from_fn(nodes, f)
}

/// Builds the 3-monotone spline for `f` on `p`.
///
/// For `n ≤ 4` the construction degenerates to the single cubic interpolating
/// `f` at `a`, `a + (b-a)/3`, `b - (b-a)/3`, `b`: its leading coefficient is
/// a third divided difference of `f`, hence nonnegative for 3-monotone input,
/// and the Whitney inequality already gives the required error bound.
pub fn build_spline(f: impl Fn(f64) -> f64, p: &Partition) -> Result<MonoSpline> {
    let n = p.n();
    if n <= 4 {
        let (a, b) = (p.a(), p.b());
        let third = (b - a) / 3.0;
        let nv = NodeValueSet::from_fn(vec![a, a + third, b - third, b], &f)?;
        let base = interpolant_power_basis(&nv);
        let cubic = TruncatedPowerSpline::new((a, b), base)?;
        return Ok(MonoSpline {
            fourth_diff_form: cubic.clone(),
            third_diff_form: cubic,
            partition: p.clone(),
            plan: KnotPlan::trivial(p),
            table: None,
            pieces: BTreeMap::new(),
            fallback: true,
        });
    }

    let table = classify(&f, p)?;
    let plan = plan_knots(&table, p)?;
    let pieces = build_pieces(&table, &plan, p)?;

    let mut third_diff_form = TruncatedPowerSpline::new(
        (p.a(), p.b()),
        interpolant_power_basis(&endpoint_values(&f, p, 3)?),
    )?;
    for j in 3..=n {
        let d = table.third(j);
        third_diff_form.accumulate(&pieces[&j].spline, d);
        third_diff_form.accumulate(&pieces[&(j - 1)].spline, -d);
    }
    third_diff_form.consolidate();

    let mut fourth_diff_form = TruncatedPowerSpline::new(
        (p.a(), p.b()),
        interpolant_power_basis(&endpoint_values(&f, p, 4)?),
    )?;
    for j in 3..n {
        let w = table.fourth(j) * (p.x(j - 3) - p.x(j + 1));
        fourth_diff_form.accumulate(&pieces[&j].spline, w);
    }
    fourth_diff_form.consolidate();

    let infos = pieces
        .into_iter()
        .map(|(j, piece)| (j, piece.info))
        .collect();
    Ok(MonoSpline {
        fourth_diff_form,
        third_diff_form,
        partition: p.clone(),
        plan,
        table: Some(table),
        pieces: infos,
        fallback: false,
    })
}

impl MonoSpline {
    /// The spline value (telescoped form).
    pub fn eval(&self, x: f64) -> Result<f64> {
        self.third_diff_form.eval(x)
    }

    pub fn eval_unchecked(&self, x: f64) -> f64 {
        self.third_diff_form.eval_unchecked(x)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let pieces: Vec<serde_json::Value> = self
            .pieces
            .iter()
            .map(|(j, info)| {
                json!({
                    "j": j,
                    "rule": format!("{:?}", info.rule),
                    "knots": info.knots,
                    "alpha": info.alpha,
                    "beta": info.beta,
                    "gamma": info.gamma,
                })
            })
            .collect();
        json!({
            "spline": self.third_diff_form.to_json(),
            "cross_check": self.fourth_diff_form.to_json(),
            "partition": self.partition.to_json(),
            "plan": self.plan.to_json(),
            "classification": self.table.as_ref().map(|t| t.to_json()),
            "pieces": pieces,
            "fallback": self.fallback,
        })
    }
}

/// Per-interval sup error of `s` against the clamped ten-interval modulus
/// window `[x_{j+4}, x_{j-5}] ∩ [a, b]` at step `h = (b-a)/n`.
pub fn error_report(
    f: impl Fn(f64) -> f64,
    s: &MonoSpline,
    grid: usize,
) -> Result<Vec<IntervalErrorRow>> {
    if grid < 32 {
        return Err(Error::invalid("error report needs grid >= 32 per interval"));
    }
    let p = &s.partition;
    let h = p.nominal_h();
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
            sup = sup.max((v - s.eval_unchecked(x)).abs());
        }
        let win = (p.clamped(j as i64 + 4), p.clamped(j as i64 - 5));
        let omega = verify::modulus(&f, 4, h, win).value;
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

/// Global sup error and its ratio to `ω₄(f, h, [a, b])`.
pub fn global_report(
    f: impl Fn(f64) -> f64,
    s: &MonoSpline,
    grid: usize,
) -> Result<(f64, f64, f64)> {
    let p = &s.partition;
    let (a, b) = (p.a(), p.b());
    let mut sup = 0.0f64;
    for i in 0..=grid {
        let x = a + (b - a) * i as f64 / grid as f64;
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::NonFinite(x));
        }
        sup = sup.max((v - s.eval_unchecked(x)).abs());
    }
    let omega = verify::modulus(&f, 4, p.nominal_h(), (a, b)).value;
    Ok((sup, omega, ratio_or_zero(sup, omega)))
}

/// One knot of the geometry report: how far it sits from the partition and
/// from its predecessor.
#[derive(Debug, Clone)]
pub struct KnotGeometryRow {
    pub knot: f64,
    pub distance_to_partition: f64,
    /// Gap to the previous knot in ascending order; `None` for the first.
    pub gap_prev: Option<f64>,
}

/// Knot geometry against an equidistant partition: every knot must stay
/// within `3h/2` of a partition point and consecutive knots at least `h/2`
/// apart.
pub fn knot_geometry_report(s: &MonoSpline, p: &Partition) -> Result<Vec<KnotGeometryRow>> {
    if !p.is_equidistant() {
        return Err(Error::invalid(
            "knot geometry report expects an equidistant partition",
        ));
    }
    let ys = s.plan.y_ascending();
    let mut rows = Vec::with_capacity(ys.len());
    let mut prev: Option<f64> = None;
    for &y in &ys {
        let dist = (0..=p.n())
            .map(|j| (p.x(j) - y).abs())
            .fold(f64::MAX, f64::min);
        rows.push(KnotGeometryRow {
            knot: y,
            distance_to_partition: dist,
            gap_prev: prev.map(|q| y - q),
        });
        prev = Some(y);
    }
    Ok(rows)
}

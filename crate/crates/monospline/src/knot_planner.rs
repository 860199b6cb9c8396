//! Classification of partition indices and assembly of the final knot set.
//!
//! For `j` in the working range `J = {3, ..., n-1}` the third divided
//! differences `Δ_j` of `f` are scanned for strict local maxima
//! (`Δ_{j+1} ≤ Δ_j > Δ_{j-1}`). Each such peak `j` gets a relocated knot
//! `d_j`: the vertex of the quadratic envelope formed by the three
//! span-weighted differences `Λ = (x_{j-3} - x_j)·Δ_j` around it. The two
//! partition points flanking `d_j` are dropped and `d_j` joins the knot set.
//! The classification is only admissible when every vertex lands inside its
//! home interval `[x_{j-1}, x_{j-2}]` and the resulting knot gaps stay within
//! `[h_near, 4·h_near)`; equidistant partitions satisfy both automatically,
//! arbitrary ones get the first violated condition reported.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::json;

use crate::divdiff::{fourth_diff, third_diff};
use crate::error::{Error, Result};
use crate::partition::Partition;

/// Containment slack for vertex and gap validation, relative to `b - a`.
const GEOMETRY_TOL: f64 = 1e-12;

/// Everything the classification pass produces.
#[derive(Debug, Clone)]
pub struct ClassificationTable {
    n: usize,
    /// `Δ_j` for `j = 3..=n` (index `j - 3`).
    third: Vec<f64>,
    /// `δ_j` for `j = 3..=n-1` (index `j - 3`).
    fourth: Vec<f64>,
    /// `Λ_j = (x_{j-3} - x_j)·Δ_j` for `j = 3..=n` (index `j - 3`).
    weighted: Vec<f64>,
    /// Strict local maxima of `Δ` (the set `W`), ascending.
    peaks: Vec<usize>,
    /// Indices whose partition points are dropped (`Z = {j-1, j-2 : j ∈ W}`).
    dropped: BTreeSet<usize>,
    /// Ordinary indices with `Δ_{j+1} ≤ Δ_j` (smoothing knots to the right).
    smooth_right: Vec<usize>,
    /// Ordinary indices with `Δ_{j+1} > Δ_j` (smoothing knots to the left).
    smooth_left: Vec<usize>,
    /// Relocated knots `d_j`, one per peak.
    vertices: BTreeMap<usize, f64>,
    /// Envelope minimum `H_j = P_j(d_j)`, one per peak.
    envelope_min: BTreeMap<usize, f64>,
    /// `H_j` recomputed with the balanced center weight, one per peak.
    envelope_min_balanced: BTreeMap<usize, f64>,
}

impl ClassificationTable {
    pub fn n(&self) -> usize {
        self.n
    }

    /// The working range `J = 3..=n-1`.
    pub fn index_range(&self) -> std::ops::RangeInclusive<usize> {
        3..=self.n - 1
    }

    /// `Δ_j`, defined for `j = 3..=n`.
    pub fn third(&self, j: usize) -> f64 {
        self.third[j - 3]
    }

    /// `δ_j`, defined for `j = 3..=n-1`.
    pub fn fourth(&self, j: usize) -> f64 {
        self.fourth[j - 3]
    }

    /// `Λ_j`, defined for `j = 3..=n`.
    pub fn weighted(&self, j: usize) -> f64 {
        self.weighted[j - 3]
    }

    pub fn peaks(&self) -> &[usize] {
        &self.peaks
    }

    pub fn dropped(&self) -> &BTreeSet<usize> {
        &self.dropped
    }

    pub fn smooth_right(&self) -> &[usize] {
        &self.smooth_right
    }

    pub fn smooth_left(&self) -> &[usize] {
        &self.smooth_left
    }

    /// All ordinary indices (`V`), ascending.
    pub fn ordinary(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .smooth_right
            .iter()
            .chain(self.smooth_left.iter())
            .copied()
            .collect();
        v.sort_unstable();
        v
    }

    pub fn is_peak(&self, j: usize) -> bool {
        self.peaks.binary_search(&j).is_ok()
    }

    pub fn vertex(&self, j: usize) -> Option<f64> {
        self.vertices.get(&j).copied()
    }

    pub fn envelope_min(&self, j: usize) -> Option<f64> {
        self.envelope_min.get(&j).copied()
    }

    pub fn envelope_min_balanced(&self, j: usize) -> Option<f64> {
        self.envelope_min_balanced.get(&j).copied()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "third_diffs": self.third,
            "fourth_diffs": self.fourth,
            "weighted_third_diffs": self.weighted,
            "peaks": self.peaks,
            "dropped": self.dropped.iter().collect::<Vec<_>>(),
            "smooth_right": self.smooth_right,
            "smooth_left": self.smooth_left,
            "vertices": self.vertices.iter().map(|(j, d)| json!({"j": j, "d": d})).collect::<Vec<_>>(),
            "envelope_min": self.envelope_min.iter().map(|(j, h)| json!({"j": j, "h": h})).collect::<Vec<_>>(),
        })
    }
}

/// Classifies the third divided differences of `f` on `p`. Needs `n ≥ 5`.
pub fn classify(f: impl Fn(f64) -> f64, p: &Partition) -> Result<ClassificationTable> {
    let n = p.n();
    if n < 5 {
        return Err(Error::invalid("classification needs n >= 5"));
    }
    for j in 0..=n {
        let v = f(p.x(j));
        if !v.is_finite() {
            return Err(Error::NonFinite(p.x(j)));
        }
    }
    let third: Vec<f64> = (3..=n).map(|j| third_diff(&f, p, j)).collect();
    // independent five-point tables, not the recursion on `third`
    let fourth: Vec<f64> = (3..n).map(|j| fourth_diff(&f, p, j)).collect();
    classify_from_diffs(p, third, fourth)
}

/// Classifies a synthetic profile of third differences (`j = 3..=n`); the
/// fourth differences are derived by the divided-difference recursion.
pub fn classify_profile(p: &Partition, third: Vec<f64>) -> Result<ClassificationTable> {
    let n = p.n();
    if third.len() != n - 2 {
        return Err(Error::invalid("profile needs one Δ per j = 3..=n"));
    }
    let fourth: Vec<f64> = (3..n)
        .map(|j| (third[j - 3] - third[j + 1 - 3]) / (p.x(j - 3) - p.x(j + 1)))
        .collect();
    classify_from_diffs(p, third, fourth)
}

fn classify_from_diffs(
    p: &Partition,
    third: Vec<f64>,
    fourth: Vec<f64>,
) -> Result<ClassificationTable> {
    let n = p.n();
    let weighted: Vec<f64> = (3..=n)
        .map(|j| (p.x(j - 3) - p.x(j)) * third[j - 3])
        .collect();
    let delta = |j: usize| third[j - 3];
    let lambda = |j: usize| weighted[j - 3];

    // Peak membership needs a strictly dominant center; a noise-relative tie
    // tolerance keeps divided-difference rounding (exactly-cubic windows give
    // Δ ~ 1e-16 instead of 0) from minting spurious peaks or splitting a
    // genuine plateau.
    let delta_scale = third.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let tie_tol = 1e-12 * delta_scale;
    let peaks: Vec<usize> = (4..=n - 1)
        .filter(|&j| delta(j + 1) <= delta(j) + tie_tol && delta(j) > delta(j - 1) + tie_tol)
        .collect();
    for w in peaks.windows(2) {
        debug_assert!(w[1] - w[0] >= 2, "adjacent peaks are impossible");
    }

    let mut dropped = BTreeSet::new();
    for &j in &peaks {
        dropped.insert(j - 1);
        dropped.insert(j - 2);
    }

    let mut vertices = BTreeMap::new();
    let mut envelope_min = BTreeMap::new();
    let mut envelope_min_balanced = BTreeMap::new();
    let tol = GEOMETRY_TOL * (p.b() - p.a());
    for &j in &peaks {
        let (lp, lc, lm) = (lambda(j + 1), lambda(j), lambda(j - 1));
        let sum = lp + lc + lm;
        if !(sum > 0.0) {
            return Err(Error::invalid(format!(
                "nonpositive envelope weight sum at peak j = {j}; \
                 input does not look 3-monotone"
            )));
        }
        let d = vertex(p, j, lp, lc, lm);
        let (lo, hi) = (p.x(j - 1), p.x(j - 2));
        if d < lo - tol || d > hi + tol {
            return Err(Error::admissibility(
                format!(
                    "relocated knot d = {d} falls outside its home interval \
                     [{lo}, {hi}] (partition is not almost equidistant)"
                ),
                j,
            ));
        }
        vertices.insert(j, d.clamp(lo, hi));
        envelope_min.insert(j, envelope_value(p, j, lp, lc, lm, d));

        // center weight balancing the two neighbors
        let lc_bal = (lp * (p.x(j - 1) - p.x(j)) + lm * (p.x(j - 3) - p.x(j - 2)))
            / (p.x(j - 2) - p.x(j - 1));
        let d_bal = vertex(p, j, lp, lc_bal, lm);
        envelope_min_balanced.insert(j, envelope_value(p, j, lp, lc_bal, lm, d_bal));
    }

    let neighbor_of_peak: BTreeSet<usize> = peaks.iter().map(|&j| j - 1).collect();
    let mut smooth_right = Vec::new();
    let mut smooth_left = Vec::new();
    for j in 3..=n - 1 {
        if peaks.binary_search(&j).is_ok() || neighbor_of_peak.contains(&j) {
            continue;
        }
        if delta(j + 1) <= delta(j) {
            smooth_right.push(j);
        } else {
            smooth_left.push(j);
        }
    }

    Ok(ClassificationTable {
        n,
        third,
        fourth,
        weighted,
        peaks,
        dropped,
        smooth_right,
        smooth_left,
        vertices,
        envelope_min,
        envelope_min_balanced,
    })
}

fn vertex(p: &Partition, j: usize, lp: f64, lc: f64, lm: f64) -> f64 {
    ((p.x(j) + p.x(j - 1)) * lp + (p.x(j - 1) + p.x(j - 2)) * lc + (p.x(j - 2) + p.x(j - 3)) * lm)
        / (2.0 * (lp + lc + lm))
}

fn envelope_value(p: &Partition, j: usize, lp: f64, lc: f64, lm: f64, at: f64) -> f64 {
    lp * (at - p.x(j)) * (at - p.x(j - 1))
        + lc * (at - p.x(j - 1)) * (at - p.x(j - 2))
        + lm * (at - p.x(j - 2)) * (at - p.x(j - 3))
}

/// The final knot sequence in descending order (`y_0 = b`, `y_k = a`) plus
/// the index maps into it.
#[derive(Debug, Clone)]
pub struct KnotPlan {
    y_desc: Vec<f64>,
    /// `i(j)` with `y_{i(j)} = x_{j-1}`, for ordinary `j`.
    ordinary_index: BTreeMap<usize, usize>,
    /// `i*(j)` with `y_{i*(j)} = d_j`, for peak `j`.
    vertex_index: BTreeMap<usize, usize>,
}

impl KnotPlan {
    /// Highest knot index `k` (the plan holds `k + 1` knots).
    pub fn k(&self) -> usize {
        self.y_desc.len() - 1
    }

    /// `y_i` in descending numbering.
    pub fn y(&self, i: usize) -> f64 {
        self.y_desc[i]
    }

    pub fn y_desc(&self) -> &[f64] {
        &self.y_desc
    }

    pub fn y_ascending(&self) -> Vec<f64> {
        self.y_desc.iter().rev().copied().collect()
    }

    pub fn ordinary_index(&self, j: usize) -> Option<usize> {
        self.ordinary_index.get(&j).copied()
    }

    pub fn vertex_index(&self, j: usize) -> Option<usize> {
        self.vertex_index.get(&j).copied()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "knots_descending": self.y_desc,
            "ordinary_index": self.ordinary_index.iter().map(|(j, i)| json!({"j": j, "i": i})).collect::<Vec<_>>(),
            "vertex_index": self.vertex_index.iter().map(|(j, i)| json!({"j": j, "i": i})).collect::<Vec<_>>(),
        })
    }

    /// A degenerate plan whose knots are exactly the partition points; used
    /// by the small-`n` fallback construction.
    pub fn trivial(p: &Partition) -> Self {
        KnotPlan {
            y_desc: p.descending().to_vec(),
            ordinary_index: BTreeMap::new(),
            vertex_index: BTreeMap::new(),
        }
    }
}

/// Assembles the knot sequence: partition points minus the dropped pairs,
/// plus the relocated vertices, plus both endpoints. Validates the knot-count
/// window and the gap bounds.
pub fn plan_knots(table: &ClassificationTable, p: &Partition) -> Result<KnotPlan> {
    let n = p.n();
    let mut y: Vec<f64> = Vec::with_capacity(n + 1);
    y.push(p.x(0));
    for j in 1..n {
        if !table.dropped().contains(&j) {
            y.push(p.x(j));
        }
    }
    y.push(p.x(n));
    for &d in table.vertices.values() {
        y.push(d);
    }
    y.sort_by(|a, b| b.total_cmp(a)); // descending

    for w in y.windows(2) {
        if !(w[0] > w[1]) {
            return Err(Error::Internal(format!(
                "duplicate knots {} and {} in the plan",
                w[0], w[1]
            )));
        }
    }

    let k = y.len() - 1;
    if k + n / 3 + 1 < n || k > n {
        return Err(Error::admissibility(
            format!("knot count k = {k} outside [n - n/3 - 1, n] for n = {n}"),
            0,
        ));
    }

    // Gap bounds: every knot gap must be commensurate with a partition
    // interval nearest to its lower knot — at least as long and under four
    // times as long. A gap between surviving partition points spans exactly
    // one interval and passes against it; the condition bites on the gaps a
    // relocated vertex creates.
    let tol = GEOMETRY_TOL * (p.b() - p.a());
    for i in 1..=k {
        let gap = y[i - 1] - y[i];
        let candidates = nearest_interval_lengths(p, y[i]);
        let commensurate = candidates
            .iter()
            .any(|&h_near| gap >= h_near - tol && gap < 4.0 * h_near + tol);
        if !commensurate {
            return Err(Error::admissibility(
                format!(
                    "knot gap {gap} at y = {} outside [h, 4h) for every nearest \
                     interval length in {candidates:?}",
                    y[i]
                ),
                i,
            ));
        }
    }

    let mut ordinary_index = BTreeMap::new();
    for j in table.ordinary() {
        let x = p.x(j - 1);
        let i = y
            .iter()
            .position(|&v| v == x)
            .ok_or_else(|| Error::Internal(format!("x_{} missing from the knot set", j - 1)))?;
        ordinary_index.insert(j, i);
    }
    let mut vertex_index = BTreeMap::new();
    for (&j, &d) in table.vertices.iter() {
        let i = y
            .iter()
            .position(|&v| v == d)
            .ok_or_else(|| Error::Internal(format!("vertex d_{j} missing from the knot set")))?;
        vertex_index.insert(j, i);
    }

    Ok(KnotPlan {
        y_desc: y,
        ordinary_index,
        vertex_index,
    })
}

/// Lengths of the partition interval(s) adjacent to `x`: both neighbors when
/// `x` is a partition point, the containing interval otherwise.
fn nearest_interval_lengths(p: &Partition, x: f64) -> Vec<f64> {
    let n = p.n();
    for j in 0..=n {
        if p.x(j) == x {
            let mut out = Vec::new();
            if j >= 1 {
                out.push(p.h(j));
            }
            if j < n {
                out.push(p.h(j + 1));
            }
            return out;
        }
    }
    for j in 1..=n {
        if p.x(j) < x && x < p.x(j - 1) {
            return vec![p.h(j)];
        }
    }
    Vec::new()
}

/// Combined debug dump used by the command-line front end.
pub fn debug_dump(table: &ClassificationTable, plan: &KnotPlan) -> serde_json::Value {
    json!({
        "classification": table.to_json(),
        "plan": plan.to_json(),
    })
}

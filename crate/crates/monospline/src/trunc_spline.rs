//! Truncated-power splines: the shared representation for every spline in
//! this crate.
//!
//! A spline is a base cubic (power basis about 0) plus truncated terms
//! `coef · (x - knot)₊^power` with the strict indicator convention
//! `(x - a)₊^r = (x - a)^r` for `x > a` and `0` for `x ≤ a`. The kink
//! functions `Ψ₃(x, x_j) = (x - x_j)(x - x_{j-1})(x - x_{j-2}) · χ(x, x_j)`
//! are kept as dedicated product terms instead of being expanded into
//! truncated powers: expanded they would carry power-0 and power-1 pieces
//! and the `C¹` certificate below would stop meaning anything. Expansion
//! happens only inside [`TruncatedPowerSpline::to_piecewise`].

use serde::{Deserialize, Serialize};

use crate::divdiff::shift_multiply;
use crate::error::{Error, Result};
use crate::partition::Partition;

/// One truncated power term `coef · (x - knot)₊^power`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub knot: f64,
    pub power: u8,
    pub coef: f64,
}

/// A scaled kink function: `coef · (x - k₁)(x - k₂)(x - k₃) · χ(x, k₁)` with
/// ascending knots, active strictly right of `k₁`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiProduct {
    pub knots: [f64; 3],
    pub coef: f64,
}

/// Base cubic plus truncated-power and product terms on a fixed domain.
///
/// Immutable in spirit: builders push terms during assembly and the value is
/// shared read-only afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedPowerSpline {
    domain: (f64, f64),
    base: [f64; 4],
    terms: Vec<Term>,
    special: Vec<PsiProduct>,
}

#[derive(Serialize, Deserialize)]
struct SplineJson {
    domain: [f64; 2],
    base: [f64; 4],
    terms: Vec<Term>,
    special_psi: Vec<PsiProduct>,
}

fn eval_poly(c: &[f64; 4], x: f64) -> f64 {
    ((c[3] * x + c[2]) * x + c[1]) * x + c[0]
}

fn poly_derivative(c: &[f64; 4], order: u8) -> [f64; 4] {
    let mut p = *c;
    for _ in 0..order {
        p = [p[1], 2.0 * p[2], 3.0 * p[3], 0.0];
    }
    p
}

/// `(x - knot)^power` expanded about 0, scaled by `coef`.
fn truncated_power_poly(knot: f64, power: u8, coef: f64) -> [f64; 4] {
    let mut p = [coef, 0.0, 0.0, 0.0];
    for _ in 0..power {
        p = shift_multiply(p, knot);
    }
    p
}

impl TruncatedPowerSpline {
    pub fn new(domain: (f64, f64), base: [f64; 4]) -> Result<Self> {
        if !(domain.0 < domain.1) || !domain.0.is_finite() || !domain.1.is_finite() {
            return Err(Error::invalid(
                "spline domain must be a nondegenerate interval",
            ));
        }
        Ok(TruncatedPowerSpline {
            domain,
            base,
            terms: Vec::new(),
            special: Vec::new(),
        })
    }

    pub fn zero(domain: (f64, f64)) -> Result<Self> {
        Self::new(domain, [0.0; 4])
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn base(&self) -> &[f64; 4] {
        &self.base
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn special(&self) -> &[PsiProduct] {
        &self.special
    }

    pub fn add_to_base(&mut self, poly: &[f64; 4], weight: f64) {
        for (acc, p) in self.base.iter_mut().zip(poly) {
            *acc += weight * p;
        }
    }

    pub fn push_term(&mut self, knot: f64, power: u8, coef: f64) -> Result<()> {
        if power > 3 {
            return Err(Error::invalid("truncated powers are cubic at most"));
        }
        if knot < self.domain.0 || knot > self.domain.1 {
            return Err(Error::OutsideDomain {
                x: knot,
                lo: self.domain.0,
                hi: self.domain.1,
            });
        }
        self.terms.push(Term { knot, power, coef });
        Ok(())
    }

    pub fn push_psi_product(&mut self, knots: [f64; 3], coef: f64) -> Result<()> {
        if !(knots[0] < knots[1] && knots[1] < knots[2]) {
            return Err(Error::invalid("product knots must be strictly ascending"));
        }
        if knots[0] < self.domain.0 || knots[2] > self.domain.1 {
            return Err(Error::invalid("product knots must lie inside the domain"));
        }
        self.special.push(PsiProduct { knots, coef });
        Ok(())
    }

    /// The kink function `Ψ₃(·, x_j)` of a partition: zero up to `x_j`, the
    /// cubic `(x - x_j)(x - x_{j-1})(x - x_{j-2})` strictly right of it.
    /// `j = 2` is the degenerate identically-zero case.
    pub fn psi3(p: &Partition, j: usize) -> Result<Self> {
        if j < 2 || j > p.n() {
            return Err(Error::invalid(format!(
                "psi3 index j = {j} outside 2..={}",
                p.n()
            )));
        }
        let mut s = Self::zero((p.a(), p.b()))?;
        if j >= 3 {
            s.push_psi_product([p.x(j), p.x(j - 1), p.x(j - 2)], 1.0)?;
        }
        Ok(s)
    }

    /// Adds `weight · other` term by term. Domains must match.
    pub fn accumulate(&mut self, other: &Self, weight: f64) {
        assert_eq!(self.domain, other.domain, "domain mismatch in accumulate");
        for d in 0..4 {
            self.base[d] += weight * other.base[d];
        }
        for t in &other.terms {
            self.terms.push(Term {
                coef: weight * t.coef,
                ..*t
            });
        }
        for s in &other.special {
            self.special.push(PsiProduct {
                coef: weight * s.coef,
                ..*s
            });
        }
    }

    /// Merges terms sharing the same (knot, power) bit pattern and drops
    /// exact zeros. Knots coming from one knot plan are bit-identical, so
    /// this keeps assembled splines at a handful of terms per knot.
    pub fn consolidate(&mut self) {
        self.terms
            .sort_by(|a, b| a.knot.total_cmp(&b.knot).then(a.power.cmp(&b.power)));
        let mut merged: Vec<Term> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            match merged.last_mut() {
                Some(last) if last.knot == t.knot && last.power == t.power => {
                    last.coef += t.coef;
                }
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coef != 0.0);
        self.terms = merged;

        self.special.sort_by(|a, b| {
            a.knots[0]
                .total_cmp(&b.knots[0])
                .then(a.knots[1].total_cmp(&b.knots[1]))
                .then(a.knots[2].total_cmp(&b.knots[2]))
        });
        let mut specials: Vec<PsiProduct> = Vec::with_capacity(self.special.len());
        for s in self.special.drain(..) {
            match specials.last_mut() {
                Some(last) if last.knots == s.knots => last.coef += s.coef,
                _ => specials.push(s),
            }
        }
        specials.retain(|s| s.coef != 0.0);
        self.special = specials;
    }

    /// Structural `C¹` certificate: no truncated terms below power 2 and no
    /// product terms (those jump in the first derivative at their knot).
    pub fn is_c1_certified(&self) -> bool {
        self.special.is_empty() && self.terms.iter().all(|t| t.power >= 2)
    }

    fn raw(&self, x: f64) -> f64 {
        let mut acc = eval_poly(&self.base, x);
        for t in &self.terms {
            if x > t.knot {
                acc += t.coef * (x - t.knot).powi(t.power as i32);
            }
        }
        for s in &self.special {
            if x > s.knots[0] {
                acc += s.coef * (x - s.knots[0]) * (x - s.knots[1]) * (x - s.knots[2]);
            }
        }
        acc
    }

    /// Value at `x` inside the domain.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if x < self.domain.0 || x > self.domain.1 {
            return Err(Error::OutsideDomain {
                x,
                lo: self.domain.0,
                hi: self.domain.1,
            });
        }
        Ok(self.raw(x))
    }

    /// Value without the domain check; callers guarantee `x ∈ [a, b]`.
    pub fn eval_unchecked(&self, x: f64) -> f64 {
        self.raw(x)
    }

    /// Derivative of the given order (1..=3) with one-sided evaluation.
    /// Order 2 is piecewise linear and order 3 piecewise constant, which is
    /// what the exact monotonicity analysis consumes.
    pub fn derivative(&self, order: u8) -> SplineDerivative {
        assert!((1..=3).contains(&order), "derivative order must be 1..=3");
        let mut gated: Vec<(f64, [f64; 4])> = Vec::new();
        for t in &self.terms {
            if t.power == 0 || order > t.power {
                continue; // differentiates to zero a.e.
            }
            let poly =
                truncated_power_poly(t.knot, t.power - order, t.coef * falling(t.power, order));
            gated.push((t.knot, poly));
        }
        for s in &self.special {
            let mut poly = [s.coef, 0.0, 0.0, 0.0];
            for k in s.knots {
                poly = shift_multiply(poly, k);
            }
            gated.push((s.knots[0], poly_derivative(&poly, order)));
        }
        // merge by identical gate knot for exact jump arithmetic
        gated.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, [f64; 4])> = Vec::new();
        for (k, p) in gated {
            match merged.last_mut() {
                Some((lk, lp)) if *lk == k => {
                    for d in 0..4 {
                        lp[d] += p[d];
                    }
                }
                _ => merged.push((k, p)),
            }
        }
        SplineDerivative {
            domain: self.domain,
            base: poly_derivative(&self.base, order),
            gated: merged,
        }
    }

    /// Exact expansion into per-piece cubics.
    pub fn to_piecewise(&self) -> PiecewisePoly {
        let (a, b) = self.domain;
        let mut breaks: Vec<f64> = vec![a, b];
        for t in &self.terms {
            if t.knot > a && t.knot < b {
                breaks.push(t.knot);
            }
        }
        for s in &self.special {
            if s.knots[0] > a && s.knots[0] < b {
                breaks.push(s.knots[0]);
            }
        }
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();

        let coefs = breaks[..breaks.len() - 1]
            .iter()
            .map(|&lo| {
                let mut c = self.base;
                for t in &self.terms {
                    if t.knot <= lo {
                        let p = truncated_power_poly(t.knot, t.power, t.coef);
                        for d in 0..4 {
                            c[d] += p[d];
                        }
                    }
                }
                for s in &self.special {
                    if s.knots[0] <= lo {
                        let mut p = [s.coef, 0.0, 0.0, 0.0];
                        for k in s.knots {
                            p = shift_multiply(p, k);
                        }
                        for d in 0..4 {
                            c[d] += p[d];
                        }
                    }
                }
                c
            })
            .collect();
        PiecewisePoly { breaks, coefs }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SplineJson {
            domain: [self.domain.0, self.domain.1],
            base: self.base,
            terms: self.terms.clone(),
            special_psi: self.special.clone(),
        })
        .expect("spline serialization cannot fail")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let parsed: SplineJson = serde_json::from_value(value.clone())
            .map_err(|e| Error::invalid(format!("bad spline JSON: {e}")))?;
        let mut s = Self::new((parsed.domain[0], parsed.domain[1]), parsed.base)?;
        for t in parsed.terms {
            s.push_term(t.knot, t.power, t.coef)?;
        }
        for sp in parsed.special_psi {
            s.push_psi_product(sp.knots, sp.coef)?;
        }
        Ok(s)
    }
}

fn falling(power: u8, order: u8) -> f64 {
    (0..order).map(|i| (power - i) as f64).product()
}

/// A derivative of a truncated-power spline, as base polynomial plus
/// polynomials gated by `χ(x, knot)`; supports one-sided evaluation at every
/// gate knot.
#[derive(Debug, Clone)]
pub struct SplineDerivative {
    domain: (f64, f64),
    base: [f64; 4],
    gated: Vec<(f64, [f64; 4])>,
}

impl SplineDerivative {
    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    /// Gate knots in ascending order (already deduplicated).
    pub fn knots(&self) -> Vec<f64> {
        self.gated.iter().map(|(k, _)| *k).collect()
    }

    /// Limit from the left: gates strictly below `x` are active.
    pub fn eval_left(&self, x: f64) -> f64 {
        let mut acc = eval_poly(&self.base, x);
        for (k, p) in &self.gated {
            if *k < x {
                acc += eval_poly(p, x);
            }
        }
        acc
    }

    /// Limit from the right: gates at or below `x` are active.
    pub fn eval_right(&self, x: f64) -> f64 {
        let mut acc = eval_poly(&self.base, x);
        for (k, p) in &self.gated {
            if *k <= x {
                acc += eval_poly(p, x);
            }
        }
        acc
    }

    /// Jump `eval_right - eval_left` at `x` (zero off the gate knots).
    pub fn jump(&self, x: f64) -> f64 {
        self.gated
            .iter()
            .filter(|(k, _)| *k == x)
            .map(|(_, p)| eval_poly(p, x))
            .sum()
    }
}

/// Piecewise cubic over ascending breakpoints tiling `[a, b]`; pieces are
/// right-open except the last.
#[derive(Debug, Clone)]
pub struct PiecewisePoly {
    breaks: Vec<f64>,
    coefs: Vec<[f64; 4]>,
}

impl PiecewisePoly {
    pub fn new(breaks: Vec<f64>, coefs: Vec<[f64; 4]>) -> Result<Self> {
        if breaks.len() < 2 || coefs.len() + 1 != breaks.len() {
            return Err(Error::invalid("need k+1 breakpoints for k pieces"));
        }
        if breaks.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("breakpoints must be strictly ascending"));
        }
        Ok(PiecewisePoly { breaks, coefs })
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn piece_count(&self) -> usize {
        self.coefs.len()
    }

    pub fn piece(&self, i: usize) -> &[f64; 4] {
        &self.coefs[i]
    }

    fn locate(&self, x: f64) -> usize {
        // last piece is closed on the right
        let k = self.breaks.partition_point(|&b| b <= x);
        k.saturating_sub(1).min(self.coefs.len() - 1)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let (a, b) = (self.breaks[0], *self.breaks.last().unwrap());
        if x < a || x > b {
            return Err(Error::OutsideDomain { x, lo: a, hi: b });
        }
        Ok(eval_poly(&self.coefs[self.locate(x)], x))
    }

    pub fn eval_unchecked(&self, x: f64) -> f64 {
        eval_poly(&self.coefs[self.locate(x)], x)
    }
}

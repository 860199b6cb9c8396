//! Partitions of `[a, b]` in the descending index convention.
//!
//! All formulas in this crate index partition points from the right:
//! `x_0 = b > x_1 > ... > x_n = a`, with intervals `I_j = [x_j, x_{j-1}]` and
//! mesh sizes `h_j = x_{j-1} - x_j`. The public API accepts and returns
//! ascending arrays, which is the universal convention for numeric tooling;
//! only the internal storage is descending.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for the equidistance validation. Partition generation
/// is exact arithmetic plus one division, so this can be tight.
pub const EQUIDISTANT_REL_TOL: f64 = 1e-12;

/// A strictly monotone partition of `[a, b]`, stored in descending order.
///
/// Immutable after construction; safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    /// `points[j] = x_j`, descending: `points[0] = b`, `points[n] = a`.
    points: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct PartitionJson {
    a: f64,
    b: f64,
    points_ascending: Vec<f64>,
}

impl Partition {
    /// The equidistant partition with `n` intervals, `h = (b-a)/n`.
    pub fn equidistant(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a >= b {
            return Err(Error::invalid(format!(
                "need a < b (finite), got a = {a}, b = {b}"
            )));
        }
        if n == 0 {
            return Err(Error::invalid("need n >= 1"));
        }
        // Convex combination for the interior, endpoints kept bit-exact.
        let points = (0..=n)
            .map(|j| {
                if j == 0 {
                    b
                } else if j == n {
                    a
                } else {
                    ((j as f64) * a + ((n - j) as f64) * b) / n as f64
                }
            })
            .collect();
        Ok(Partition { points })
    }

    /// Builds a partition from strictly increasing points (at least two).
    pub fn from_ascending(ascending: &[f64]) -> Result<Self> {
        if ascending.len() < 2 {
            return Err(Error::invalid("need at least 2 partition points"));
        }
        for w in ascending.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::invalid(format!(
                    "points must be strictly increasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        if ascending.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("partition points must be finite"));
        }
        Ok(Partition {
            points: ascending.iter().rev().copied().collect(),
        })
    }

    pub fn a(&self) -> f64 {
        *self.points.last().unwrap()
    }

    pub fn b(&self) -> f64 {
        self.points[0]
    }

    /// Number of intervals, `n`.
    pub fn n(&self) -> usize {
        self.points.len() - 1
    }

    /// `x_j` in the descending convention; panics if `j > n`.
    pub fn x(&self, j: usize) -> f64 {
        self.points[j]
    }

    /// `x_ν` with the out-of-range convention `x_ν = a` for `ν > n` and
    /// `x_ν = b` for `ν < 0`, used by the clamped modulus windows.
    pub fn clamped(&self, nu: i64) -> f64 {
        let n = self.n() as i64;
        if nu > n {
            self.a()
        } else if nu < 0 {
            self.b()
        } else {
            self.points[nu as usize]
        }
    }

    /// Mesh size `h_j = x_{j-1} - x_j` for `j = 1..=n`.
    pub fn h(&self, j: usize) -> f64 {
        assert!(j >= 1 && j <= self.n(), "interval index out of range");
        self.points[j - 1] - self.points[j]
    }

    /// The interval `I_j = [x_j, x_{j-1}]` as `(lo, hi)`.
    pub fn interval(&self, j: usize) -> (f64, f64) {
        (self.x(j), self.x(j - 1))
    }

    /// Nominal mesh size `(b-a)/n`.
    pub fn nominal_h(&self) -> f64 {
        (self.b() - self.a()) / self.n() as f64
    }

    pub fn max_h(&self) -> f64 {
        (1..=self.n()).map(|j| self.h(j)).fold(0.0, f64::max)
    }

    pub fn min_h(&self) -> f64 {
        (1..=self.n()).map(|j| self.h(j)).fold(f64::MAX, f64::min)
    }

    /// True when every `h_j` is within `EQUIDISTANT_REL_TOL * (b-a)` of `(b-a)/n`.
    pub fn is_equidistant(&self) -> bool {
        let h = self.nominal_h();
        let tol = EQUIDISTANT_REL_TOL * (self.b() - self.a());
        (1..=self.n()).all(|j| (self.h(j) - h).abs() <= tol)
    }

    /// Ascending copy of the points.
    pub fn ascending(&self) -> Vec<f64> {
        self.points.iter().rev().copied().collect()
    }

    /// Descending view (the internal index convention).
    pub fn descending(&self) -> &[f64] {
        &self.points
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PartitionJson {
            a: self.a(),
            b: self.b(),
            points_ascending: self.ascending(),
        })
        .expect("partition serialization cannot fail")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let parsed: PartitionJson = serde_json::from_value(value.clone())
            .map_err(|e| Error::invalid(format!("bad partition JSON: {e}")))?;
        let p = Partition::from_ascending(&parsed.points_ascending)?;
        if p.a() != parsed.a || p.b() != parsed.b {
            return Err(Error::invalid(
                "partition JSON endpoints disagree with points_ascending",
            ));
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn equidistant_four_intervals() {
        let p = Partition::equidistant(-1.0, 1.0, 4).unwrap();
        assert_eq!(p.descending(), &[1.0, 0.5, 0.0, -0.5, -1.0]);
        for j in 1..=4 {
            assert_eq!(p.h(j), 0.5);
        }
        assert!(p.is_equidistant());
    }

    #[test]
    fn equidistant_single_interval() {
        let p = Partition::equidistant(-1.0, 1.0, 1).unwrap();
        assert_eq!(p.descending(), &[1.0, -1.0]);
    }

    #[test]
    fn equidistant_integer_points() {
        let p = Partition::equidistant(0.0, 3.0, 3).unwrap();
        assert_eq!(p.descending(), &[3.0, 2.0, 1.0, 0.0]);
    }

    #[test]
    fn equidistant_rejects_bad_arguments() {
        assert!(Partition::equidistant(-1.0, 1.0, 0).is_err());
        assert!(Partition::equidistant(1.0, 1.0, 4).is_err());
        assert!(Partition::equidistant(2.0, 1.0, 4).is_err());
    }

    #[test]
    fn custom_three_points() {
        let p = Partition::from_ascending(&[-1.0, 0.0, 1.0]).unwrap();
        assert_eq!(p.x(2), -1.0);
        assert_eq!(p.x(1), 0.0);
        assert_eq!(p.x(0), 1.0);
    }

    #[test]
    fn custom_rejects_duplicates() {
        assert!(Partition::from_ascending(&[0.0, 1.0, 1.0]).is_err());
        assert!(Partition::from_ascending(&[0.0]).is_err());
    }

    #[test]
    fn custom_mesh_sizes() {
        let p = Partition::from_ascending(&[-1.0, -0.4, 0.1, 0.6, 1.0]).unwrap();
        let hs: Vec<f64> = (1..=p.n()).map(|j| p.h(j)).collect();
        // h_j indexed descending: h_1 is the rightmost interval.
        assert_eq!(hs, vec![0.4, 0.5, 0.5, 0.6]);
        assert!(!p.is_equidistant());
    }

    #[test]
    fn clamped_index_convention() {
        let p = Partition::equidistant(-1.0, 1.0, 4).unwrap();
        assert_eq!(p.clamped(9), -1.0);
        assert_eq!(p.clamped(-3), 1.0);
        for j in 0..=4i64 {
            assert_eq!(p.clamped(j), p.x(j as usize));
        }
    }

    #[test]
    fn json_round_trip() {
        let p = Partition::from_ascending(&[-1.0, -0.25, 0.5, 1.0]).unwrap();
        let back = Partition::from_json(&p.to_json()).unwrap();
        assert_eq!(p, back);
    }

    proptest! {
        #[test]
        fn ascending_round_trip(raw in proptest::collection::vec(-1000.0f64..1000.0, 2..40)) {
            let mut ascending = raw;
            ascending.sort_by(f64::total_cmp);
            ascending.dedup();
            prop_assume!(ascending.len() >= 2);
            prop_assume!(ascending.windows(2).all(|w| w[1] - w[0] > 1e-9));
            let p = Partition::from_ascending(&ascending).unwrap();
            prop_assert_eq!(p.ascending(), ascending);
        }

        #[test]
        fn equidistant_mesh_within_tolerance(n in 1usize..200, a in -10.0f64..0.0, len in 0.1f64..10.0) {
            let b = a + len;
            let p = Partition::equidistant(a, b, n).unwrap();
            prop_assert!(p.is_equidistant());
            prop_assert_eq!(p.a(), a);
            prop_assert_eq!(p.b(), b);
        }
    }
}

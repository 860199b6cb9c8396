//! Divided differences, Lagrange interpolation and the Whitney-inequality
//! utility — the scalar kernel every other module calls.

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::verify;

/// Nodes closer than this (relative to the node span) are rejected rather
/// than regularized; the construction never generates coincident nodes.
pub const MIN_NODE_SEP_REL: f64 = 1e-13;

/// Distinct nodes paired with function values.
#[derive(Debug, Clone)]
pub struct NodeValueSet {
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl NodeValueSet {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != values.len() {
            return Err(Error::invalid(
                "need equally many nodes and values, at least one of each",
            ));
        }
        let span = nodes.iter().cloned().fold(f64::MIN, f64::max)
            - nodes.iter().cloned().fold(f64::MAX, f64::min);
        let min_sep = MIN_NODE_SEP_REL * span.max(1.0);
        for (i, &a) in nodes.iter().enumerate() {
            for &b in &nodes[i + 1..] {
                if (a - b).abs() <= min_sep {
                    return Err(Error::invalid(format!(
                        "nodes {a} and {b} too close (confluent differences unsupported)"
                    )));
                }
            }
        }
        Ok(NodeValueSet { nodes, values })
    }

    pub fn from_fn(nodes: Vec<f64>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
        for (&x, &v) in nodes.iter().zip(&values) {
            if !v.is_finite() {
                return Err(Error::NonFinite(x));
            }
        }
        NodeValueSet::new(nodes, values)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// The divided difference `[t_0, ..., t_k; g]` over all nodes of `nv`,
/// computed by the recursive table. The result is symmetric in the nodes up
/// to rounding.
pub fn divided_difference(nv: &NodeValueSet) -> f64 {
    divided_table(nv.nodes(), nv.values())[0]
}

/// Top row of the divided-difference table: entry `k` is `[t_0, ..., t_k; g]`.
/// These are exactly the Newton-form coefficients for the node ordering given.
pub fn newton_coefficients(nv: &NodeValueSet) -> Vec<f64> {
    let nodes = nv.nodes();
    let n = nodes.len();
    let mut col = nv.values().to_vec();
    let mut top = Vec::with_capacity(n);
    top.push(col[0]);
    for k in 1..n {
        for i in 0..n - k {
            col[i] = (col[i + 1] - col[i]) / (nodes[i + k] - nodes[i]);
        }
        top.push(col[0]);
    }
    top
}

fn divided_table(nodes: &[f64], values: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    let mut col = values.to_vec();
    for k in 1..n {
        for i in 0..n - k {
            col[i] = (col[i + 1] - col[i]) / (nodes[i + k] - nodes[i]);
        }
    }
    col.truncate(1);
    col
}

/// Value at `x` of the unique polynomial of degree `< nv.len()` interpolating
/// the node set, evaluated in Newton form.
pub fn lagrange_eval(nv: &NodeValueSet, x: f64) -> f64 {
    let coefs = newton_coefficients(nv);
    let nodes = nv.nodes();
    let mut acc = coefs[coefs.len() - 1];
    for k in (0..coefs.len() - 1).rev() {
        acc = acc * (x - nodes[k]) + coefs[k];
    }
    acc
}

/// Expands the interpolating polynomial of `nv` into power-basis coefficients
/// about 0 (constant term first). Degree must be at most 3.
pub(crate) fn interpolant_power_basis(nv: &NodeValueSet) -> [f64; 4] {
    assert!(nv.nodes().len() <= 4, "power-basis expansion is cubic only");
    let coefs = newton_coefficients(nv);
    let nodes = nv.nodes();
    let mut acc = [0.0f64; 4];
    // basis starts at 1 and picks up one factor (x - t_k) per step
    let mut basis = [1.0, 0.0, 0.0, 0.0];
    for (k, &c) in coefs.iter().enumerate() {
        for d in 0..4 {
            acc[d] += c * basis[d];
        }
        if k + 1 < coefs.len() {
            basis = shift_multiply(basis, nodes[k]);
        }
    }
    acc
}

/// Multiplies a cubic-capacity polynomial by `(x - root)`.
pub(crate) fn shift_multiply(p: [f64; 4], root: f64) -> [f64; 4] {
    debug_assert!(p[3] == 0.0, "degree overflow in polynomial product");
    [
        -root * p[0],
        p[0] - root * p[1],
        p[1] - root * p[2],
        p[2] - root * p[3],
    ]
}

/// Third divided difference over four consecutive partition points,
/// `[x_j, x_{j-1}, x_{j-2}, x_{j-3}; f]`, defined for `j = 3..=n`.
pub fn third_diff(f: impl Fn(f64) -> f64, p: &Partition, j: usize) -> f64 {
    debug_assert!((3..=p.n()).contains(&j));
    let nodes = [p.x(j), p.x(j - 1), p.x(j - 2), p.x(j - 3)];
    let values: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
    divided_table(&nodes, &values)[0]
}

/// Fourth divided difference over five consecutive partition points,
/// `[x_{j+1}, x_j, x_{j-1}, x_{j-2}, x_{j-3}; f]`, defined for `j = 3..=n-1`.
pub fn fourth_diff(f: impl Fn(f64) -> f64, p: &Partition, j: usize) -> f64 {
    debug_assert!((3..p.n()).contains(&j));
    let nodes = [p.x(j + 1), p.x(j), p.x(j - 1), p.x(j - 2), p.x(j - 3)];
    let values: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
    divided_table(&nodes, &values)[0]
}

/// Measures how far `g` is from certifying the Whitney inequality on `[a, b]`:
/// returns `max |g - l₃|` over the grid minus `ω₄(g, (b-a)/4, [a, b])`, where
/// `l₃` interpolates `g` at `a`, `a + (b-a)/3`, `b - (b-a)/3`, `b`.
/// A nonpositive return certifies the inequality on that grid.
pub fn whitney_defect(g: impl Fn(f64) -> f64, a: f64, b: f64, grid: usize) -> Result<f64> {
    if !(a < b) {
        return Err(Error::invalid("whitney_defect needs a < b"));
    }
    if grid < 16 {
        return Err(Error::invalid("whitney_defect needs grid >= 16"));
    }
    let third = (b - a) / 3.0;
    let nv = NodeValueSet::from_fn(vec![a, a + third, b - third, b], &g)?;
    let mut sup = 0.0f64;
    for i in 0..=grid {
        let x = a + (b - a) * i as f64 / grid as f64;
        let v = g(x);
        if !v.is_finite() {
            return Err(Error::NonFinite(x));
        }
        sup = sup.max((v - lagrange_eval(&nv, x)).abs());
    }
    let omega = verify::modulus(&g, 4, (b - a) / 4.0, (a, b)).value;
    Ok(sup - omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent oracle: Neville's algorithm, coded separately from the
    /// divided-difference table above.
    fn neville_eval(nodes: &[f64], values: &[f64], x: f64) -> f64 {
        let mut q = values.to_vec();
        let n = nodes.len();
        for k in 1..n {
            for i in 0..n - k {
                q[i] = ((x - nodes[i + k]) * q[i] + (nodes[i] - x) * q[i + 1])
                    / (nodes[i] - nodes[i + k]);
            }
        }
        q[0]
    }

    /// Independent oracle for the leading coefficient of the interpolant:
    /// sample the Neville polynomial on an equispaced stencil and take the
    /// k-th forward difference divided by `k! u^k`.
    fn leading_coefficient_oracle(nodes: &[f64], values: &[f64]) -> f64 {
        let k = nodes.len() - 1;
        let u = 0.37; // arbitrary step, unrelated to the nodes
        let samples: Vec<f64> = (0..=k)
            .map(|i| neville_eval(nodes, values, 1.3 + u * i as f64))
            .collect();
        let mut diff = samples;
        for _ in 0..k {
            for i in 0..diff.len() - 1 {
                diff[i] = diff[i + 1] - diff[i];
            }
            diff.pop();
        }
        let factorial: f64 = (1..=k).map(|i| i as f64).product();
        diff[0] / (factorial * u.powi(k as i32))
    }

    #[test]
    fn cubic_third_difference_is_leading_coefficient() {
        let nodes = vec![0.0, 1.0, 2.0, 3.0];
        let values: Vec<f64> = nodes.iter().map(|&x: &f64| x.powi(3)).collect();
        let nv = NodeValueSet::new(nodes.clone(), values.clone()).unwrap();
        let dd = divided_difference(&nv);
        let oracle = leading_coefficient_oracle(&nodes, &values);
        assert!((dd - 1.0).abs() < 1e-12, "dd = {dd}");
        assert!((dd - oracle).abs() < 1e-9, "oracle disagrees: {oracle}");
    }

    #[test]
    fn third_difference_annihilates_quadratics() {
        let nodes = vec![-0.3, 0.2, 0.9, 2.4];
        let nv = NodeValueSet::from_fn(nodes, |x| 3.0 * x * x - x + 7.0).unwrap();
        assert!(divided_difference(&nv).abs() < 1e-12);
    }

    #[test]
    fn first_difference_is_slope() {
        let nv = NodeValueSet::from_fn(vec![0.0, 1.0], |x| x).unwrap();
        assert_eq!(divided_difference(&nv), 1.0);
    }

    #[test]
    fn lagrange_reproduces_quadratic() {
        let nv = NodeValueSet::from_fn(vec![-1.0, 0.0, 1.0], |x| x * x).unwrap();
        assert!((lagrange_eval(&nv, 0.5) - 0.25).abs() < 1e-14);
    }

    #[test]
    fn lagrange_interpolates_at_nodes() {
        let f = |x: f64| (2.0 * x).sin();
        let nodes = vec![-0.9, -0.1, 0.4, 1.1];
        let nv = NodeValueSet::from_fn(nodes.clone(), f).unwrap();
        for &t in &nodes {
            assert!((lagrange_eval(&nv, t) - f(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn lagrange_reproduces_cubic() {
        let nv = NodeValueSet::from_fn(vec![0.0, 1.0, 2.0, 3.0], |x| x.powi(3)).unwrap();
        assert!((lagrange_eval(&nv, 1.5) - 3.375).abs() < 1e-12);
    }

    #[test]
    fn rejects_near_coincident_nodes() {
        let err = NodeValueSet::new(vec![0.0, 1e-15, 1.0], vec![0.0, 0.0, 1.0]);
        assert!(err.is_err());
    }

    #[test]
    fn interpolant_power_basis_matches_eval() {
        let nv = NodeValueSet::from_fn(vec![-1.0, -0.2, 0.5, 1.0], |x| x.exp()).unwrap();
        let c = interpolant_power_basis(&nv);
        for i in 0..=20 {
            let x = -1.0 + 0.1 * i as f64;
            let horner = ((c[3] * x + c[2]) * x + c[1]) * x + c[0];
            assert!((horner - lagrange_eval(&nv, x)).abs() < 1e-10);
        }
    }

    #[test]
    fn whitney_defect_zero_for_cubics() {
        let d = whitney_defect(|x| x.powi(3) - 2.0 * x, -1.0, 1.0, 64).unwrap();
        assert!(d.abs() < 1e-12, "defect = {d}");
    }

    #[test]
    fn whitney_defect_nonpositive_quartic() {
        // Both sides computed by grid brute force.
        let d = whitney_defect(|x| x.powi(4), 0.0, 1.0, 256).unwrap();
        assert!(d <= 1e-12, "defect = {d}");
    }

    #[test]
    fn whitney_defect_nonpositive_exp() {
        let d = whitney_defect(|x| x.exp(), -1.0, 1.0, 256).unwrap();
        assert!(d <= 1e-12, "defect = {d}");
    }

    #[test]
    fn partition_diffs_match_direct_tables() {
        let p = Partition::equidistant(-1.0, 1.0, 8).unwrap();
        let f = |x: f64| x.exp();
        for j in 3..=8 {
            let nv =
                NodeValueSet::from_fn(vec![p.x(j), p.x(j - 1), p.x(j - 2), p.x(j - 3)], f).unwrap();
            assert!((third_diff(f, &p, j) - divided_difference(&nv)).abs() < 1e-13);
        }
        for j in 3..8 {
            let nv = NodeValueSet::from_fn(
                vec![p.x(j + 1), p.x(j), p.x(j - 1), p.x(j - 2), p.x(j - 3)],
                f,
            )
            .unwrap();
            assert!((fourth_diff(f, &p, j) - divided_difference(&nv)).abs() < 1e-13);
        }
    }

    fn distinct_quad(raw: [f64; 4], min_gap: f64) -> Option<Vec<f64>> {
        let mut nodes = raw.to_vec();
        nodes.sort_by(f64::total_cmp);
        nodes
            .windows(2)
            .all(|w| w[1] - w[0] > min_gap)
            .then_some(nodes)
    }

    proptest! {
        #[test]
        fn permutation_invariance(
            raw in proptest::array::uniform4(-5.0f64..5.0),
            rot in 0usize..4,
        ) {
            let nodes = match distinct_quad(raw, 1e-2) {
                Some(n) => n,
                None => return Ok(()),
            };
            let f = |x: f64| x.exp() + 0.5 * x.powi(3);
            let nv = NodeValueSet::from_fn(nodes.clone(), f).unwrap();
            let reference = divided_difference(&nv);

            let mut rotated = nodes;
            rotated.rotate_left(rot);
            let last = rotated.len() - 1;
            rotated.swap(0, last);
            let nv2 = NodeValueSet::from_fn(rotated, f).unwrap();
            let other = divided_difference(&nv2);
            let scale = reference.abs().max(1e-3);
            prop_assert!((reference - other).abs() <= 1e-10 * scale);
        }

        #[test]
        fn annihilates_lower_degree_polynomials(
            raw in proptest::array::uniform4(-3.0f64..3.0),
            c in proptest::array::uniform3(-2.0f64..2.0),
        ) {
            // degree-2 polynomial, third difference must vanish
            let nodes = match distinct_quad(raw, 1e-2) {
                Some(n) => n,
                None => return Ok(()),
            };
            let nv = NodeValueSet::from_fn(nodes, |x| c[0] + c[1] * x + c[2] * x * x).unwrap();
            prop_assert!(divided_difference(&nv).abs() < 1e-9);
        }

        #[test]
        fn corpus_third_differences_nonnegative(
            raw in proptest::array::uniform4(-0.99f64..0.99),
            which in 0usize..3,
        ) {
            // necessary condition for membership in the 3-monotone class
            let nodes = match distinct_quad(raw, 1e-3) {
                Some(n) => n,
                None => return Ok(()),
            };
            let f: fn(f64) -> f64 = match which {
                0 => |x: f64| x.exp(),
                1 => |x: f64| x * x * if x > 0.0 { 1.0 } else if x < 0.0 { -1.0 } else { 0.0 },
                _ => |x: f64| x.sinh(),
            };
            let nv = NodeValueSet::from_fn(nodes, f).unwrap();
            prop_assert!(divided_difference(&nv) >= -1e-10);
        }
    }
}

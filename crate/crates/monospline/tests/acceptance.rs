//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line. Run with `cargo test --test acceptance -- --nocapture`.
//!
//! Empirical envelopes (the `PINNED_*` constants) were measured at the first
//! release on the fixed seeds below and are intentionally frozen: a regression
//! that pushes a ratio past its envelope is a finding, not a tuning knob.

use std::time::Instant;

use monospline::divdiff::whitney_defect;
use monospline::funcs::{standard_corpus, FunctionSpec};
use monospline::knot_planner::{classify, plan_knots};
use monospline::mono_builder::{build_spline, error_report, global_report, knot_geometry_report};
use monospline::partition::Partition;
use monospline::phi_builder::{build_phi, phi_coefficients, phi_deviation};
use monospline::s3_builder::build_s3;
use monospline::trunc_spline::TruncatedPowerSpline;
use monospline::verify::{check_3monotone_spline, window_inequality_fuzz};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CERT_SIZES: [usize; 5] = [5, 8, 16, 32, 64];

/// Global error/modulus envelopes pinned at first release with ~2x headroom
/// over the measured maxima across n in CERT_SIZES (measured: exp 0.062,
/// cubic 0.0, sinh 0.107, x2sign 0.019, xplus3 0.069, quartic 0.063).
const PINNED_GLOBAL_RATIO: [(&str, f64); 6] = [
    ("exp", 0.15),
    ("cubic", 0.01),
    ("sinh", 0.25),
    ("x2sign", 0.05),
    ("xplus3", 0.15),
    ("quartic", 0.15),
];

fn verdict(name: &str, pass: bool, detail: &str) -> bool {
    println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    pass
}

#[test]
fn criterion_cubic_exactness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let p = Partition::equidistant(-1.0, 1.0, 10).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let c: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let f = |x: f64| ((c[0] * x + c[1]) * x + c[2]) * x + c[3];
        let s = build_spline(f, &p).unwrap();
        for i in 0..=512 {
            let x = -1.0 + 2.0 * i as f64 / 512.0;
            worst = worst.max((s.eval_unchecked(x) - f(x)).abs());
        }
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1e-10 && elapsed.as_secs_f64() < 1.0;
    assert!(verdict(
        "cubic-exactness",
        pass,
        &format!("max error {worst:.3e} over 20 random cubics in {elapsed:.2?}")
    ));
}

#[test]
fn criterion_monotonicity_certificate() {
    let start = Instant::now();
    let mut all = true;
    let mut worst_detail = String::new();
    for (name, spec) in standard_corpus() {
        let f = spec.evaluator();
        for n in CERT_SIZES {
            let p = Partition::equidistant(-1.0, 1.0, n).unwrap();
            let s = build_spline(&f, &p).unwrap();
            let report = check_3monotone_spline(&s.third_diff_form, 1e-9);
            if !report.pass {
                all = false;
                worst_detail = format!("{name} at n = {n}: {report:?}");
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = all && elapsed.as_secs_f64() < 10.0;
    let detail = if all {
        format!("30 builds certified by exact piecewise analysis in {elapsed:.2?}")
    } else {
        worst_detail
    };
    assert!(verdict("3-monotonicity-certificate", pass, &detail));
}

#[test]
fn criterion_convergence_order() {
    let f = |x: f64| x.exp();
    let mut sups = Vec::new();
    for n in [8usize, 16, 32, 64] {
        let p = Partition::equidistant(-1.0, 1.0, n).unwrap();
        let s = build_spline(f, &p).unwrap();
        let mut sup = 0.0f64;
        for i in 0..=4096 {
            let x = -1.0 + 2.0 * i as f64 / 4096.0;
            sup = sup.max((s.eval_unchecked(x) - f(x)).abs());
        }
        sups.push(sup);
    }
    let orders: Vec<f64> = sups.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let pass = orders.iter().all(|&o| o >= 3.5);
    assert!(verdict(
        "convergence-order",
        pass,
        &format!("exp(x) doubling orders {orders:.3?} (errors {sups:?})")
    ));
}

#[test]
fn criterion_bounded_constant() {
    let mut pass = true;
    let mut details = Vec::new();
    for (name, spec) in standard_corpus() {
        let f = spec.evaluator();
        let envelope = PINNED_GLOBAL_RATIO
            .iter()
            .find(|(n, _)| *n == name)
            .expect("envelope per corpus function")
            .1;
        let mut max_global = 0.0f64;
        let mut per_interval_max: Vec<f64> = Vec::new();
        for n in CERT_SIZES {
            let p = Partition::equidistant(-1.0, 1.0, n).unwrap();
            let s = build_spline(&f, &p).unwrap();
            let (_, _, ratio) = global_report(&f, &s, 2048).unwrap();
            if ratio > envelope {
                pass = false;
                details.push(format!(
                    "{name} n = {n}: global ratio {ratio:.3} > {envelope}"
                ));
            }
            max_global = max_global.max(ratio);
            let rows = error_report(&f, &s, 64).unwrap();
            per_interval_max.push(rows.iter().map(|r| r.ratio).fold(0.0, f64::max));
        }
        // the per-interval constant must not trend upward with n
        let growing = per_interval_max.windows(2).all(|w| w[1] > w[0] * 1.02);
        if growing {
            pass = false;
            details.push(format!(
                "{name}: per-interval ratios grow monotonically: {per_interval_max:.3?}"
            ));
        }
        details.push(format!(
            "{name}: global <= {max_global:.3} (pinned {envelope}), per-interval max {:.3}",
            per_interval_max.iter().cloned().fold(0.0, f64::max)
        ));
    }
    assert!(verdict("bounded-constant", pass, &details.join("; ")));
}

#[test]
fn criterion_representation_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(1005);
    let mut pass = true;
    let mut worst = 0.0f64;
    for (_, spec) in standard_corpus() {
        let f = spec.evaluator();
        for n in [5usize, 16] {
            let p = Partition::equidistant(-1.0, 1.0, n).unwrap();
            let s = build_spline(&f, &p).unwrap();
            let s3 = build_s3(&f, &p).unwrap();
            for _ in 0..1000 {
                let x = rng.random_range(-1.0..1.0);
                let v24 = s.third_diff_form.eval_unchecked(x);
                let gap_mono =
                    (s.fourth_diff_form.eval_unchecked(x) - v24).abs() / v24.abs().max(1.0);
                let pw = s3.piecewise.eval_unchecked(x);
                let gap6 = (s3.fourth_diff_form.eval_unchecked(x) - pw).abs() / pw.abs().max(1.0);
                let gap7 = (s3.third_diff_form.eval_unchecked(x) - pw).abs() / pw.abs().max(1.0);
                worst = worst.max(gap_mono).max(gap6).max(gap7);
                if gap_mono > 1e-9 || gap6 > 1e-9 || gap7 > 1e-9 {
                    pass = false;
                }
            }
        }
    }
    assert!(verdict(
        "representation-identities",
        pass,
        &format!("max relative gap {worst:.3e} over corpus x {{5, 16}} x 1000 points")
    ));
}

#[test]
fn criterion_knot_geometry() {
    let mut pass = true;
    let mut details = Vec::new();
    for (name, spec) in standard_corpus() {
        let f = spec.evaluator();
        for n in CERT_SIZES {
            let p = Partition::equidistant(-1.0, 1.0, n).unwrap();
            let h = p.nominal_h();
            let table = classify(&f, &p).unwrap();
            let plan = plan_knots(&table, &p).unwrap();
            let k = plan.k();
            if k + n / 3 + 1 < n || k > n {
                pass = false;
                details.push(format!("{name} n = {n}: k = {k} out of window"));
            }
            let ys = plan.y_ascending();
            for w in ys.windows(2) {
                let gap = w[1] - w[0];
                if gap < h - 1e-12 || gap >= 4.0 * h + 1e-12 {
                    pass = false;
                    details.push(format!("{name} n = {n}: gap {gap} outside [h, 4h)"));
                }
            }
            let s = build_spline(&f, &p).unwrap();
            for r in knot_geometry_report(&s, &p).unwrap() {
                if r.distance_to_partition > 1.5 * h + 1e-12 {
                    pass = false;
                    details.push(format!("{name} n = {n}: knot {} too far", r.knot));
                }
                if let Some(g) = r.gap_prev {
                    if g < 0.5 * h - 1e-12 {
                        pass = false;
                        details.push(format!("{name} n = {n}: gap {g} < h/2"));
                    }
                }
            }
        }
    }
    let detail = if details.is_empty() {
        "knots within 3h/2 of the partition, gaps in [h/2, 4h), counts in window".to_string()
    } else {
        details.join("; ")
    };
    assert!(verdict("knot-geometry", pass, &detail));
}

#[test]
fn criterion_phi_correctness() {
    let mut rng = ChaCha8Rng::seed_from_u64(1007);
    let mut pass = true;
    let mut worst_gap = 0.0f64;

    for _ in 0..1000 {
        let h = rng.random_range(0.05..0.5);
        let left = rng.random_range(-1.0..1.0);
        let mid = left + rng.random_range(h..4.0 * h);
        let right = mid + rng.random_range(h..4.0 * h);
        // kink triple in the same scale, strictly ascending, near the knots
        let xj = left - rng.random_range(0.0..2.0 * h);
        let xjm1 = xj + rng.random_range(h..4.0 * h);
        let xjm2 = xjm1 + rng.random_range(h..4.0 * h);

        let c = match phi_coefficients(left, mid, right, xj, xjm1, xjm2) {
            Ok(c) => c,
            Err(_) => continue,
        };
        let domain = (xj.min(left) - h, right + 8.0 * h);
        let phi = build_phi(&c, left, mid, right, domain).unwrap();
        if !phi.is_c1_certified() {
            pass = false;
        }
        let d1 = phi.derivative(1);
        for knot in [left, mid, right] {
            if (d1.eval_left(knot) - d1.eval_right(knot)).abs() > 1e-10 {
                pass = false;
            }
        }
        let psi = |x: f64| {
            if x > xj {
                (x - xj) * (x - xjm1) * (x - xjm2)
            } else {
                0.0
            }
        };
        // zero left of the first knot, kink function from the last knot on
        for i in 0..=32 {
            let lo = domain.0;
            let x = lo + (left.min(xj) - lo) * i as f64 / 32.0;
            if phi.eval_unchecked(x).abs() > 1e-12 {
                pass = false;
            }
        }
        for i in 0..=64 {
            let x = right + (domain.1 - right) * i as f64 / 64.0;
            let gap = (phi.eval_unchecked(x) - psi(x)).abs() / psi(x).abs().max(1.0);
            worst_gap = worst_gap.max(gap);
            if gap > 1e-9 {
                pass = false;
            }
        }
    }

    // dyadic scaling of the deviation: slope 3 +/- 0.2
    let mut slopes = Vec::new();
    for trial in 0..20 {
        let mut t_rng = ChaCha8Rng::seed_from_u64(2000 + trial);
        let g1 = t_rng.random_range(1.0..3.9);
        let g2 = t_rng.random_range(1.0..3.9);
        let off = t_rng.random_range(0.0..1.5);
        let mut devs = Vec::new();
        for level in 0..6 {
            let h = 0.5f64.powi(level);
            let (l, m, r) = (0.0, g1 * h, (g1 + g2) * h);
            let (xj, xjm1, xjm2) = (-off * h, (1.2 - off) * h, (2.7 - off) * h);
            let c = phi_coefficients(l, m, r, xj, xjm1, xjm2).unwrap();
            let domain = (xj.min(l) - h, r + 2.0 * h);
            let phi = build_phi(&c, l, m, r, domain).unwrap();
            let mut psi = TruncatedPowerSpline::zero(domain).unwrap();
            psi.push_psi_product([xj, xjm1, xjm2], 1.0).unwrap();
            devs.push(phi_deviation(&phi, &psi, (xj.min(l), r), 256));
        }
        for w in devs.windows(2) {
            slopes.push((w[0] / w[1]).log2());
        }
    }
    let slope_ok = slopes.iter().all(|&s| (s - 3.0).abs() <= 0.2);
    if !slope_ok {
        pass = false;
    }
    let (lo, hi) = slopes
        .iter()
        .fold((f64::MAX, f64::MIN), |(lo, hi), &s| (lo.min(s), hi.max(s)));
    assert!(verdict(
        "phi-correctness",
        pass,
        &format!("tail gap <= {worst_gap:.3e}; dyadic deviation slopes in [{lo:.3}, {hi:.3}]")
    ));
}

#[test]
fn criterion_window_inequality_fuzz() {
    let mut pass = true;
    let mut details = Vec::new();
    for (name, spec) in standard_corpus() {
        let f = spec.evaluator();
        let (violations, min_slack) =
            window_inequality_fuzz(&f, (-1.0, 1.0), 10_000, 1009).unwrap();
        if violations > 0 {
            pass = false;
        }
        details.push(format!(
            "{name}: {violations} violations, min slack {min_slack:.2e}"
        ));
    }
    assert!(verdict("lemma1-fuzz", pass, &details.join("; ")));
}

#[test]
fn criterion_negative_control() {
    let spec = FunctionSpec::X2Sign;
    let f = spec.evaluator();
    let p = Partition::equidistant(-1.0, 1.0, 8).unwrap();
    let s3 = build_s3(&f, &p).unwrap();
    let s = build_spline(&f, &p).unwrap();
    let s3_report = check_3monotone_spline(&s3.third_diff_form, 1e-9);
    let s_report = check_3monotone_spline(&s.third_diff_form, 1e-9);
    let pass = !s3_report.pass && s_report.pass;
    assert!(verdict(
        "negative-control",
        pass,
        &format!(
            "interpolation fails (worst jump {:?}), construction passes",
            s3_report.worst_jump.map(|(k, l, r)| (k, r - l))
        )
    ));
}

#[test]
fn criterion_whitney_utility() {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let corpus = standard_corpus();
    let mut worst = f64::MIN;
    let mut pass = true;
    for trial in 0..100 {
        let (_, spec) = &corpus[trial % corpus.len()];
        let f = spec.evaluator();
        let a = rng.random_range(-1.0..0.8);
        let b = a + rng.random_range(0.1..(1.0f64 - a).min(1.9));
        let d = whitney_defect(&f, a, b, 256).unwrap();
        worst = worst.max(d);
        if d > 1e-12 {
            pass = false;
        }
    }
    assert!(verdict(
        "whitney-utility",
        pass,
        &format!("max defect {worst:.3e} over 100 (function, subinterval) pairs")
    ));
}

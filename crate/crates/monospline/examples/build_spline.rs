//! Build a shape-preserving spline for `exp(x)` and inspect the result.
//!
//! ```bash
//! cargo run --example build_spline
//! ```

use monospline::mono_builder::{build_spline, error_report, global_report};
use monospline::partition::Partition;
use monospline::verify::check_3monotone_spline;

fn main() -> monospline::Result<()> {
    let f = |x: f64| x.exp();
    let p = Partition::equidistant(-1.0, 1.0, 16)?;
    let s = build_spline(f, &p)?;

    println!("built a C¹ cubic spline with {} knots:", s.plan.k() + 1);
    for (i, y) in s.plan.y_ascending().iter().enumerate() {
        print!("{}{y:.4}", if i == 0 { "  " } else { ", " });
    }
    println!();

    let report = check_3monotone_spline(&s.third_diff_form, 1e-9);
    println!(
        "3-monotone: {} (worst second-derivative jump {:+.2e})",
        if report.pass { "yes" } else { "NO" },
        report.worst_jump.map(|(_, l, r)| r - l).unwrap_or(0.0),
    );

    let (sup, omega, ratio) = global_report(f, &s, 2048)?;
    println!("max |f - s| = {sup:.3e}, omega4(f, h) = {omega:.3e}, ratio = {ratio:.3}");

    println!("\nper-interval errors against the local modulus window:");
    println!(
        "{:>3} {:>9} {:>12} {:>12} {:>8}",
        "j", "x_j", "sup_err", "omega4", "ratio"
    );
    for r in error_report(f, &s, 128)? {
        println!(
            "{:>3} {:>9.4} {:>12.3e} {:>12.3e} {:>8.3}",
            r.j, r.x_j, r.sup_error, r.omega4, r.ratio
        );
    }
    Ok(())
}

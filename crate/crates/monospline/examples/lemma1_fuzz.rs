//! Fuzz the divided-difference window inequalities that power the envelope
//! argument: on any six equidistant points, the middle third difference of a
//! 3-monotone function is bounded by its neighbors.
//!
//! ```bash
//! cargo run --example window_inequality_fuzz
//! ```

use monospline::funcs::standard_corpus;
use monospline::verify::{window_inequality_check, window_inequality_fuzz};

fn main() -> monospline::Result<()> {
    // a window where the upper bound is tight: symmetric straddle of the
    // x²·sign(x) kink
    let x2sign = |x: f64| {
        x * x
            * if x > 0.0 {
                1.0
            } else if x < 0.0 {
                -1.0
            } else {
                0.0
            }
    };
    let out = window_inequality_check(x2sign, &[-1.0, -0.6, -0.2, 0.2, 0.6, 1.0])?;
    println!(
        "tight case: lhs = {:.4}, A + 2B = {:.4} (slack {:.1e})",
        out.lhs,
        out.a + 2.0 * out.b,
        out.upper_slack
    );

    println!("\n10,000 random equidistant windows per corpus function:");
    for (name, spec) in standard_corpus() {
        let f = spec.evaluator();
        let (violations, min_slack) = window_inequality_fuzz(&f, (-1.0, 1.0), 10_000, 42)?;
        println!("  {name:>8}: {violations} violations, minimum slack {min_slack:.3e}");
    }
    Ok(())
}

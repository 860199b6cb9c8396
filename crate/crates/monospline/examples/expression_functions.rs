//! User-defined functions: parse an expression, screen it for
//! 3-monotonicity, and approximate it.
//!
//! ```bash
//! cargo run --example expression_functions
//! ```

use monospline::funcs::FunctionSpec;
use monospline::mono_builder::{build_spline, global_report};
use monospline::partition::Partition;
use monospline::verify::{check_3monotone_spline, check_function_3monotone};

fn main() -> monospline::Result<()> {
    let sources = [
        "x^3 + exp(x)",
        "max(x, 0)^3 + 0.5*x^2*sign(x)",
        "sinh(x) / 2",
    ];
    let p = Partition::equidistant(-1.0, 1.0, 16)?;
    for src in sources {
        let spec = FunctionSpec::parse(src)?;
        let f = spec.evaluator();
        let screened = check_function_3monotone(&f, (-1.0, 1.0), 512, 1);
        let s = build_spline(&f, &p)?;
        let pass = check_3monotone_spline(&s.third_diff_form, 1e-9).pass;
        let (sup, _, ratio) = global_report(&f, &s, 2048)?;
        println!("{src}");
        println!(
            "  screen: {}, spline certificate: {}, error {sup:.3e} (ratio {ratio:.3})",
            if screened {
                "3-monotone"
            } else {
                "NOT 3-monotone"
            },
            if pass { "PASS" } else { "FAIL" },
        );
    }

    // parse errors carry byte offsets
    match FunctionSpec::parse("x^2 + * 3") {
        Err(e) => println!("\nerror reporting: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}

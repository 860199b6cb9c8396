//! Watch the planner work: where the third divided differences of the input
//! peak, two partition points are traded for the vertex of the local
//! quadratic envelope.
//!
//! ```bash
//! cargo run --example knot_relocation
//! ```

use monospline::knot_planner::{classify, plan_knots};
use monospline::partition::Partition;

fn x2sign(x: f64) -> f64 {
    x * x
        * if x > 0.0 {
            1.0
        } else if x < 0.0 {
            -1.0
        } else {
            0.0
        }
}

fn main() -> monospline::Result<()> {
    let p = Partition::equidistant(-1.0, 1.0, 8)?;
    let table = classify(x2sign, &p)?;

    println!("third divided differences over four-point windows:");
    for j in 3..=p.n() {
        println!(
            "  Δ_{j} = {:>8.4}   window [{:>5.2}, {:>5.2}]{}",
            table.third(j),
            p.x(j),
            p.x(j - 3),
            if table.is_peak(j) {
                "   <- strict local max"
            } else {
                ""
            }
        );
    }

    for &j in table.peaks() {
        println!(
            "\npeak at j = {j}: vertex d = {:.4} inside [{}, {}], envelope minimum H = {:.2e}",
            table.vertex(j).unwrap(),
            p.x(j - 1),
            p.x(j - 2),
            table.envelope_min(j).unwrap()
        );
        println!(
            "dropped partition points: x_{} = {}, x_{} = {}",
            j - 1,
            p.x(j - 1),
            j - 2,
            p.x(j - 2)
        );
    }

    let plan = plan_knots(&table, &p)?;
    println!(
        "\nfinal knots ({} of originally {}):",
        plan.k() + 1,
        p.n() + 1
    );
    println!("  {:?}", plan.y_ascending());
    println!(
        "every gap stays within [h, 4h) of the mesh size h = {}",
        p.nominal_h()
    );
    Ok(())
}

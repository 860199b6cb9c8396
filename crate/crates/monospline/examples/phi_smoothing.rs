//! The C¹ smoothing device: a kink function (cubic switched on at a knot,
//! with a first-derivative jump there) is replaced by a spline of four
//! truncated powers that matches it exactly outside a small interval, with a
//! sup deviation of order h³.
//!
//! ```bash
//! cargo run --example phi_smoothing
//! ```

use monospline::partition::Partition;
use monospline::phi_builder::{build_phi, phi_coefficients, phi_deviation};
use monospline::trunc_spline::TruncatedPowerSpline;

fn main() -> monospline::Result<()> {
    // kink at x = 1 with factors at 1, 2, 3; smoothing knots 1, 2, 3
    let c = phi_coefficients(1.0, 2.0, 3.0, 0.0, 1.0, 2.0)?;
    println!(
        "closed-form coefficients: alpha = {:.4}, beta = {:.4}, gamma = {:.4}",
        c.alpha, c.beta, c.gamma
    );
    let phi = build_phi(&c, 1.0, 2.0, 3.0, (0.0, 6.0))?;
    println!("C¹ by construction: {}", phi.is_c1_certified());

    let psi = |x: f64| {
        if x > 0.0 {
            x * (x - 1.0) * (x - 2.0)
        } else {
            0.0
        }
    };
    println!("\n        x        phi        psi");
    for x in [0.5, 1.5, 2.5, 3.0, 4.0, 5.0] {
        println!("{:>9.2} {:>10.4} {:>10.4}", x, phi.eval(x)?, psi(x));
    }
    println!("(agreement is exact from the last smoothing knot on)");

    println!("\nsup |psi - phi| under dyadic mesh refinement:");
    let mut prev: Option<f64> = None;
    for level in 0..6 {
        let h = 1.0 / 2f64.powi(level);
        let p = Partition::from_ascending(&[0.0, h, 2.0 * h, 3.0 * h, 4.0 * h])?;
        let c = phi_coefficients(h, 2.0 * h, 3.0 * h, h, 2.0 * h, 3.0 * h)?;
        let phi = build_phi(&c, h, 2.0 * h, 3.0 * h, (0.0, 4.0 * h))?;
        let psi = TruncatedPowerSpline::psi3(&p, 3)?;
        let dev = phi_deviation(&phi, &psi, (h, 3.0 * h), 1024);
        let slope = prev.map(|d: f64| (d / dev).log2());
        println!(
            "  h = {h:<9} deviation = {dev:.6e}{}",
            slope
                .map(|s| format!("   (order {s:.3})"))
                .unwrap_or_default()
        );
        prev = Some(dev);
    }
    Ok(())
}

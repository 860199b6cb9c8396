//! The brute-force fourth modulus of smoothness: the yardstick every error
//! bound in this crate is measured against.
//!
//! ```bash
//! cargo run --example modulus_of_smoothness
//! ```

use monospline::funcs::standard_corpus;
use monospline::verify::modulus;

fn main() {
    println!("omega_4(f, t) on [-1, 1] over dyadic steps:");
    print!("{:>10}", "t");
    let corpus = standard_corpus();
    for (name, _) in &corpus {
        print!("{name:>12}");
    }
    println!();

    for m in 0..5 {
        let t = 0.025 * 2f64.powi(m);
        print!("{t:>10.3}");
        for (_, spec) in &corpus {
            let f = spec.evaluator();
            print!("{:>12.3e}", modulus(f, 4, t, (-1.0, 1.0)).value);
        }
        println!();
    }

    println!("\nsanity: omega_4(x^4, t) = 24 t^4 -- the fourth difference of x^4 is 4!·u^4:");
    for t in [0.05, 0.1, 0.2] {
        let est = modulus(|x: f64| x.powi(4), 4, t, (-1.0, 1.0));
        println!(
            "  t = {t}: measured {:.6e}, identity {:.6e}",
            est.value,
            24.0 * t.powi(4)
        );
    }

    println!("\ndoubling the step never more than 16x the modulus (k = 4):");
    let f = |x: f64| x.exp();
    for t in [0.02, 0.05, 0.1] {
        let w1 = modulus(f, 4, t, (-1.0, 1.0)).value;
        let w2 = modulus(f, 4, 2.0 * t, (-1.0, 1.0)).value;
        println!("  omega(2*{t}) / omega({t}) = {:.3}", w2 / w1);
    }
}

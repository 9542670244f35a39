//! Rate exponents and regimes across smoothness, blur and design irregularity.
//!
//! cargo run --release --example exponent_table

use afdecon::analysis::{theoretical_exponent, BesovParams};

fn main() {
    println!("s1    s2    p    nu   beta  regime  d        min-formula");
    for (s1, s2, p) in [(4.0, 1.0, 2.0), (1.0, 1.0, 2.0), (1.0, 2.0, 1.0), (0.8, 3.0, 1.5), (2.0, 2.0, f64::INFINITY)] {
        for (nu, beta) in [(1.0, 0.0), (0.5, 0.3), (2.0, 0.6)] {
            let bp = BesovParams::new(s1, s2, p, f64::INFINITY, 1.0);
            match theoretical_exponent(&bp, nu, beta, beta) {
                Ok(c) => println!(
                    "{s1:<5} {s2:<5} {p:<4} {nu:<4} {beta:<5} {:<7} {:<8.5} {:.5}{}",
                    c.regime,
                    c.exponent,
                    c.min_exponent,
                    if c.agrees_with_min { "" } else { "  (differs)" }
                ),
                Err(e) => println!("{s1:<5} {s2:<5} {p:<4} {nu:<4} {beta:<5} {e}"),
            }
        }
    }
}

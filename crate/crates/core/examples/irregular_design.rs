//! Quantile designs from the power-law density with a zero at an interior point.
//!
//! cargo run --release --example irregular_design -- 0.5 0.3

use afdecon::model::{quantile_design, DesignDensity};

fn main() -> afdecon::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let beta = args.first().copied().unwrap_or(0.5);
    let x0 = args.get(1).copied().unwrap_or(0.3);
    let d = DesignDensity::new(beta, x0)?;
    println!("h(x) = {:.6} |x - {x0}|^{beta}", d.normalization());
    println!("integral of 1/h = {:.6}", d.reciprocal_integral());

    let pts = quantile_design(32, &d)?;
    let mut hist = [0usize; 10];
    for &p in &pts {
        hist[((p * 10.0) as usize).min(9)] += 1;
    }
    println!("\n32 design points per tenth of [0, 1]:");
    for (i, c) in hist.iter().enumerate() {
        println!("  [{:.1}, {:.1})  {}", i as f64 / 10.0, (i + 1) as f64 / 10.0, "#".repeat(*c));
    }
    let gap = pts
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(0.0, f64::max);
    println!("largest gap {gap:.4} (the density vanishes at {x0})");
    Ok(())
}

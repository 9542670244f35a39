//! Periodized Meyer atoms: Fourier bands, Parseval norms and point evaluation.
//!
//! cargo run --release --example meyer_basis

use afdecon::wavelets::{build_basis, build_level, eval_on_points, Axis, Basis1d, WaveletSpec};

fn main() -> afdecon::Result<()> {
    let spec = WaveletSpec::default();
    println!("level  kind     shifts  band  ||atom||^2");
    for j in 2..=7 {
        let tables = build_basis(&spec, Axis::Time, j)?;
        let t = &tables[0];
        println!("{j:>5}  {:<7}  {:>6}  {:>4}  {:.12}", format!("{:?}", t.kind), tables.len(), t.band(), t.parseval_sum());
    }

    let level = build_level(&spec, Axis::Time, 4)?;
    let pts: Vec<f64> = (0..8).map(|i| i as f64 / 8.0).collect();
    let vals = eval_on_points(&level.table(3), &pts);
    println!("\npsi_(4,3) on a coarse grid:");
    for (t, v) in pts.iter().zip(&vals) {
        println!("  t = {t:.3}  {v:+.5}");
    }

    let basis = Basis1d::new(&spec, Axis::Time, 7)?;
    let a = basis.level(6).series(10);
    let b = basis.level(5).series(3);
    println!(
        "\nbasis dimension {} through level 6; <psi_(6,10), psi_(6,10)> = {:.12}, <psi_(6,10), psi_(5,3)> = {:.2e}",
        basis.dim(),
        a.inner(&a),
        a.inner(&b)
    );
    Ok(())
}

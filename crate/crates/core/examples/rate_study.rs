//! Convergence-rate ladder for short and long memory, written as CSV.
//!
//! cargo run --release --example rate_study -- target/rate

use afdecon::analysis::{rate_experiment, Ladder, Scenario};
use std::fs::File;
use std::path::PathBuf;

fn main() -> afdecon::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "target/rate".into()));
    std::fs::create_dir_all(&out)?;
    let ladder = Ladder::default();
    for alpha in [1.0, 0.5] {
        let mut s = Scenario::default();
        s.noise.sigma = 0.01;
        s.noise.alpha = alpha;
        let rep = rate_experiment(&s, &ladder, 2024)?;
        println!("alpha = {alpha}");
        for p in &rep.points {
            println!(
                "  N = {:>4}  M = {:>4}  n = {:>9.0}  J = ({}, {})  MISE = {:.4e} ± {:.1e}  kept {:.0}",
                p.n, p.m, p.n_eff, p.j1, p.j2, p.mise, p.se, p.kept_mean
            );
        }
        print!("{}", rep.summary());
        rep.write_csv(File::create(out.join(format!("rate_alpha{alpha}.csv")))?)?;
    }
    Ok(())
}

//! Simulate noisy blurred surfaces, estimate by hard thresholding, and write the results.
//!
//! cargo run --release --example simulate_and_estimate -- target/demo

use afdecon::analysis::{mise, Scenario};
use afdecon::estimator::reconstruct;
use afdecon::model::{DesignDensity, FunctionChoice};
use std::fs::File;
use std::path::PathBuf;

fn main() -> afdecon::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "target/demo".into()));
    std::fs::create_dir_all(&out)?;

    let mut s = Scenario::default();
    s.function = FunctionChoice::BumpRamp { amplitude: 1.0 };
    s.noise.alpha = 0.6;
    s.noise.sigma = 0.005;
    s.design_t = DesignDensity::new(0.3, 0.37)?;
    // Near the zero of the design density the local sampling rate is too low for the finest automatic levels.
    s.estimator.j1 = Some(5);
    s.estimator.j2 = Some(6);

    let pipeline = s.pipeline(256, 256)?;
    let obs = pipeline.observe(42);
    obs.save(&out.join("observations.afdc"))?;

    let field = pipeline.field(&obs)?;
    let set = pipeline.estimator.index_set();
    println!(
        "levels J1 = {}, J2 = {}; kept {} of {} coefficients",
        set.time.top,
        set.space.top,
        field.kept_count(),
        set.len()
    );
    field.write_csv(File::create(out.join("coefficients.csv"))?)?;

    let rec = reconstruct(&field, pipeline.estimator.basis_t(), pipeline.estimator.basis_x(), 128)?;
    rec.write_pgm(File::create(out.join("estimate.pgm"))?)?;
    let loss_grid = mise(&rec, &s.test_function(), s.wavelet.grid)?;
    let loss_coef = field.loss_from_coefficients(pipeline.norm_sq)?;
    println!("squared L2 error {loss_coef:.4e} (coefficients) {loss_grid:.4e} (grid); ||f||^2 = {:.4}", pipeline.norm_sq);
    println!("wrote {}", out.display());
    Ok(())
}

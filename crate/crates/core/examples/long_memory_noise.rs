//! Long-range dependent fractional Gaussian noise: autocovariance, sample paths and the
//! eigenvalue range of the covariance matrix.
//!
//! cargo run --release --example long_memory_noise

use afdecon::model::{covariance_extremes, fgn_autocovariance, NoiseKind, NoiseSampler, NoiseSpec};

fn main() -> afdecon::Result<()> {
    println!("alpha  H     r(1)    r(10)   r(100)");
    for alpha in [0.2, 0.5, 0.8, 1.0] {
        let r = fgn_autocovariance(101, alpha);
        println!("{alpha:<5}  {:.2}  {:+.4}  {:+.4}  {:+.4}", 1.0 - alpha / 2.0, r[1], r[10], r[100]);
    }

    println!("\nN     alpha  lambda_min  lambda_max  lambda_max / N^(1-alpha)");
    for n in [128, 512] {
        for alpha in [0.4, 0.8] {
            let (lo, hi) = covariance_extremes(n, alpha)?;
            println!("{n:<5} {alpha:<5}  {lo:>10.4}  {hi:>10.2}  {:.4}", hi / (n as f64).powf(1.0 - alpha));
        }
    }

    for kind in [NoiseKind::GaussianFgn, NoiseKind::SubgaussianRademacher] {
        let spec = NoiseSpec {
            alpha: 0.4,
            kind,
            ..NoiseSpec::default()
        };
        let sampler = NoiseSampler::new(&spec, 4096)?;
        let path = sampler.sample_profile(7, 0);
        let block = |k: usize| path.chunks(k).map(|c| c.iter().sum::<f64>() / k as f64).map(|m| m * m).sum::<f64>() / (path.len() / k) as f64;
        println!(
            "\n{kind:?}, N = 4096: variance of block means k = 1, 16, 256: {:.3}, {:.3}, {:.3} (white noise would give 1, 0.0625, 0.0039)",
            block(1),
            block(16),
            block(256)
        );
    }
    Ok(())
}

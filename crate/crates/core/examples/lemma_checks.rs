//! Quadrature orders, coefficient moments and threshold tails of the estimator.
//!
//! cargo run --release --example lemma_checks

use afdecon::analysis::lemmas::{lemma1_sweep, tail_decay, verify_lemma1, verify_lemma2, verify_lemma3};
use afdecon::analysis::Scenario;
use afdecon::estimator::Index;
use afdecon::model::DesignDensity;

fn main() -> afdecon::Result<()> {
    let mut s = Scenario::default();
    let d = DesignDensity::new(0.3, 0.5)?;
    let sweep = lemma1_sweep(&d, 3..=6, 3, 2);
    let q = verify_lemma1(&s.kernel, &s.wavelet, &d, &d, &sweep)?;
    println!("quadrature over {} indices: spreads {:.3} (second), {:.3} (fourth)", sweep.len(), q.second_spread, q.fourth_spread);

    for alpha in [1.0, 0.5] {
        s.noise.alpha = alpha;
        let m = verify_lemma2(&s, &Index::new(3, 2, 2, 1), &[128, 256, 512], 128, 200, 1)?;
        println!(
            "alpha {alpha}: variance slope {:.3} ± {:.3}, kurtosis {:.3}",
            m.slope.slope, m.slope.slope_se, m.pooled_kurtosis
        );
    }

    s.noise.alpha = 0.8;
    let t = verify_lemma3(&s, 128, 128, 200, 2)?;
    let (at, f) = t.max_frequency();
    println!("largest exceedance of lambda/2 at N = M = 128: {f:.4} at {at}");

    s.estimator.gamma = 0.5;
    let decay = tail_decay(&s, &[[32, 32], [64, 64], [128, 128]], 200, 3)?;
    println!("with gamma = 0.5, max frequency by n: {:?}; fitted decay {:?}", decay.points, decay.tau);
    Ok(())
}

//! Acceptance criteria A1 to A8, one line each on stdout (`cargo test --test acceptance -- --nocapture`).

use afdecon::analysis::lemmas::{lemma1_sweep, verify_lemma1, verify_lemma2, verify_lemma3};
use afdecon::analysis::stats::{mean, replicate_seed, standard_error};
use afdecon::analysis::{rate_experiment, theoretical_exponent, BesovParams, Ladder, RateReport, Scenario};
use afdecon::estimator::Index;
use afdecon::model::{covariance_extremes, DesignDensity, FunctionChoice, KernelSpec, NoiseKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn verdict(id: &str, pass: bool, detail: String) {
    println!("{id} {} {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{id} failed: {detail}");
}

fn rate_scenario(alpha: f64) -> Scenario {
    let mut s = Scenario::default();
    s.function = FunctionChoice::TensorSinusoid { amplitude: 1.0 };
    s.noise.alpha = alpha;
    s.noise.sigma = 0.01;
    s
}

fn rate_run(alpha: f64) -> RateReport {
    let ladder = Ladder {
        sizes: vec![[128, 128], [256, 256], [512, 512], [1024, 1024]],
        replicates: 20,
    };
    rate_experiment(&rate_scenario(alpha), &ladder, 2024).unwrap()
}

#[test]
fn a1_regime_two_rate() {
    let rep = rate_run(1.0);
    let target = rep.target_slope().unwrap();
    let pass = (target + 0.4).abs() < 1e-12 && (rep.fit.slope - target).abs() <= 0.15;
    verdict("A1", pass, format!("slope {:.4} ± {:.4}, target {target:.4}, tol 0.15", rep.fit.slope, rep.fit.slope_se));
}

#[test]
fn a1b_long_memory_degrades() {
    let short = rate_run(1.0);
    let long = rate_run(0.5);
    let slope_ok = (long.fit.slope + 0.4).abs() <= 0.2;
    let larger = long.points.iter().zip(&short.points).all(|(l, s)| l.mise > s.mise);
    let ratios: Vec<String> = long
        .points
        .iter()
        .zip(&short.points)
        .map(|(l, s)| format!("{:.2}", l.mise / s.mise))
        .collect();
    verdict(
        "A1b",
        slope_ok && larger,
        format!("slope {:.4} vs n = MN^0.5, tol 0.2; MISE ratio alpha 0.5 / 1 per point [{}]", long.fit.slope, ratios.join(", ")),
    );
}

#[test]
fn a2_variance_law() {
    let w = Index::new(3, 2, 2, 1);
    let mut lines = Vec::new();
    let mut pass = true;
    for alpha in [0.5, 1.0] {
        let mut s = Scenario::default();
        s.noise.alpha = alpha;
        let rep = verify_lemma2(&s, &w, &[128, 256, 512, 1024], 128, 500, 77).unwrap();
        pass &= (rep.slope.slope + alpha).abs() <= 0.15;
        lines.push(format!("alpha {alpha}: slope {:.4} (kurtosis {:.3})", rep.slope.slope, rep.pooled_kurtosis));
    }
    verdict("A2", pass, format!("{}; tol 0.15", lines.join("; ")));
}

#[test]
fn a3_covariance_eigenvalue_bounds() {
    let mut lines = Vec::new();
    let mut pass = true;
    for alpha in [0.4, 0.6, 0.8, 1.0] {
        let ratios: Vec<(f64, f64)> = [128usize, 256, 512, 1024]
            .iter()
            .map(|&n| {
                let (lo, hi) = covariance_extremes(n, alpha).unwrap();
                let scale = (n as f64).powf(1.0 - alpha);
                (lo / scale, hi / scale)
            })
            .collect();
        let spread = |f: fn(&(f64, f64)) -> f64| {
            let v: Vec<f64> = ratios.iter().map(f).collect();
            v.iter().copied().fold(f64::MIN, f64::max) / v.iter().copied().fold(f64::MAX, f64::min)
        };
        let (s_lo, s_hi) = (spread(|r| r.0), spread(|r| r.1));
        pass &= s_lo <= 2.0 && s_hi <= 2.0;
        lines.push(format!("alpha {alpha}: min spread {s_lo:.3}, max spread {s_hi:.3}"));
    }
    verdict("A3", pass, format!("{}; limit 2", lines.join("; ")));
}

#[test]
fn a4_quadrature_orders() {
    let s = Scenario::default();
    let mut lines = Vec::new();
    let mut pass = true;
    for beta in [0.0, 0.3] {
        let d = DesignDensity::new(beta, 0.5).unwrap();
        let idx = lemma1_sweep(&d, 3..=6, 3, 2);
        let rep = verify_lemma1(&s.kernel, &s.wavelet, &d, &d, &idx).unwrap();
        pass &= rep.second_spread <= 8.0 && rep.fourth_spread <= 16.0;
        lines.push(format!(
            "beta {beta}: second {:.3}, fourth {:.3}",
            rep.second_spread, rep.fourth_spread
        ));
    }
    verdict("A4", pass, format!("{}; limits 8 and 16", lines.join("; ")));
}

#[test]
fn a5_threshold_tail() {
    let mut lines = Vec::new();
    let mut pass = true;
    for (kind, label) in [(NoiseKind::GaussianFgn, "gaussian gamma 4"), (NoiseKind::SubgaussianRademacher, "rademacher mu 4")] {
        for alpha in [1.0, 0.5] {
            let mut s = Scenario::default();
            s.noise.kind = kind;
            s.noise.alpha = alpha;
            s.estimator.gamma = 4.0;
            s.estimator.mu = 4.0;
            let rep = verify_lemma3(&s, 256, 256, 1000, 31).unwrap();
            let (at, f) = rep.max_frequency();
            pass &= f <= 0.01;
            lines.push(format!("{label} alpha {alpha}: max {f:.4} at {at} over {}", rep.set.len()));
        }
    }
    verdict("A5", pass, format!("{}; limit 0.01", lines.join("; ")));
}

#[test]
fn a6_noiseless_consistency() {
    let mut s = Scenario::default();
    s.kernel = KernelSpec::identity();
    s.noise.sigma = 0.0;
    let (n, m) = (512, 512);
    let cap = s.setup().levels(m, n).0;
    let losses: Vec<f64> = (3..=cap)
        .map(|j1| {
            let mut sj = s.clone();
            sj.estimator.j1 = Some(j1);
            sj.pipeline(n, m).unwrap().loss(0).unwrap()
        })
        .collect();
    let decreasing = losses.windows(2).all(|w| w[1] < w[0]);
    let last = *losses.last().unwrap();
    let shown: Vec<String> = losses.iter().map(|l| format!("{l:.3e}")).collect();
    verdict(
        "A6",
        decreasing && last <= 1e-3,
        format!("MISE for J1 = 3..={cap}: [{}], limit 1e-3 at cap", shown.join(", ")),
    );
}

#[test]
fn a7_exponent_table() {
    let cases = [
        (BesovParams::new(4.0, 1.0, 2.0, f64::INFINITY, 1.0), 1u8, 2.0 / 3.0),
        (BesovParams::new(1.0, 1.0, 2.0, f64::INFINITY, 1.0), 2, 0.4),
        (BesovParams::new(1.0, 2.0, 1.0, f64::INFINITY, 1.0), 3, 1.0 / 3.0),
    ];
    let mut exact = true;
    for (bp, regime, d) in cases {
        let c = theoretical_exponent(&bp, 1.0, 0.0, 0.0).unwrap();
        exact &= c.regime == regime && (c.exponent - d).abs() <= 1e-15;
    }
    let (mut checked, mut unclassified, mut disagree) = (0usize, 0usize, 0usize);
    for p in [2.0, 4.0, f64::INFINITY] {
        for nu in [0.5, 1.0, 2.0] {
            for beta in [0.0, 0.3, 0.6] {
                for a in 0..20 {
                    for b in 0..20 {
                        let s1 = 0.6 + 3.4 * a as f64 / 19.0;
                        let s2 = 0.6 + 3.4 * b as f64 / 19.0;
                        let bp = BesovParams::new(s1, s2, p, f64::INFINITY, 1.0);
                        match theoretical_exponent(&bp, nu, beta, beta) {
                            Ok(c) => {
                                checked += 1;
                                if !c.agrees_with_min {
                                    disagree += 1;
                                }
                            }
                            Err(_) => unclassified += 1,
                        }
                    }
                }
            }
        }
    }
    verdict(
        "A7",
        exact && disagree == 0 && checked > 0,
        format!("worked examples exact: {exact}; min-formula agreement {} of {checked} classified, {unclassified} on boundaries", checked - disagree),
    );
}

#[test]
fn a8_unbiasedness() {
    let mut s = Scenario::default();
    s.noise.alpha = 0.8;
    let pipeline = s.pipeline(256, 256).unwrap();
    let set = pipeline.estimator.index_set();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cells: Vec<(usize, usize)> = (0..10)
        .map(|_| (rng.random_range(0..set.time.dim()), rng.random_range(0..set.space.dim())))
        .collect();
    let draws: Vec<Vec<f64>> = (0..500u64)
        .into_par_iter()
        .map(|r| {
            let raw = pipeline.estimator.raw_coefficients(&pipeline.observe(replicate_seed(99, r)).y).unwrap();
            cells.iter().map(|&c| raw[c]).collect()
        })
        .collect();
    let mut worst: f64 = 0.0;
    let mut worst_at = set.index_at(0, 0);
    for (i, &c) in cells.iter().enumerate() {
        let v: Vec<f64> = draws.iter().map(|d| d[i]).collect();
        let z = (mean(&v) - pipeline.truth[c]).abs() / standard_error(&v);
        if z > worst {
            worst = z;
            worst_at = set.index_at(c.0, c.1);
        }
    }
    verdict("A8", worst <= 4.0, format!("largest |mean - truth| / SE = {worst:.3} at {worst_at} over 10 indices, limit 4"));
}

use afdecon::cli::RunConfig;
use afdecon::model::{NoiseKind, ObservationGrid};
use nalgebra::DMatrix;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn run_config_survives_toml(
        seed in any::<u64>(),
        alpha in 0.05f64..=1.0,
        sigma in 0.0f64..10.0,
        beta in 0.0f64..0.95,
        x0 in 0.01f64..0.99,
        subgaussian in any::<bool>(),
        sizes in prop::collection::vec((8usize..4096, 8usize..4096), 0..6),
        j1 in prop::option::of(0u32..12),
    ) {
        let mut cfg = RunConfig::default();
        cfg.seed = seed;
        cfg.scenario.noise.alpha = alpha;
        cfg.scenario.noise.sigma = sigma;
        cfg.scenario.design_x.beta = beta;
        cfg.scenario.design_x.singularity = x0;
        cfg.scenario.noise.kind = if subgaussian { NoiseKind::SubgaussianRademacher } else { NoiseKind::GaussianFgn };
        cfg.ladder.sizes = sizes.into_iter().map(|(n, m)| [n, m]).collect();
        cfg.scenario.estimator.j1 = j1;
        let back = RunConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        prop_assert_eq!(back, cfg);
    }

    #[test]
    fn binary_observations_round_trip(
        n in 1usize..40,
        m in 1usize..40,
        seed in any::<u64>(),
        values in prop::collection::vec(-1e6f64..1e6, 1600),
    ) {
        let obs = ObservationGrid {
            t: (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect(),
            x: (0..m).map(|l| (l as f64 + 0.25) / m as f64).collect(),
            y: DMatrix::from_fn(n, m, |i, l| values[i * 40 + l]),
            seed,
        };
        let mut buf = Vec::new();
        obs.write_afdc(&mut buf).unwrap();
        prop_assert_eq!(buf.len(), 4 + 12 + 8 * (n + m + n * m) + 8);
        let back = ObservationGrid::read_afdc(buf.as_slice()).unwrap();
        prop_assert_eq!(back, obs);
    }
}

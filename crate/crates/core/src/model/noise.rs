//! Long-memory errors: fractional Gaussian noise covariance with Hurst index `1 - α/2`,
//! driven by Gaussian or Rademacher innovations.

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Largest size for which the exact triangular factor is used under `Factorization::Auto`.
pub const CHOLESKY_LIMIT: usize = 2048;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseKind {
    #[default]
    GaussianFgn,
    SubgaussianRademacher,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Factorization {
    #[default]
    Auto,
    Cholesky,
    Circulant,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseSpec {
    /// Long-memory parameter in (0, 1]; 1 is white noise.
    pub alpha: f64,
    pub kind: NoiseKind,
    pub sigma: f64,
    pub factorization: Factorization,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            kind: NoiseKind::GaussianFgn,
            sigma: 1.0,
            factorization: Factorization::Auto,
        }
    }
}

impl NoiseSpec {
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            out.push(format!("noise.alpha must lie in (0, 1] (got {})", self.alpha));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            out.push(format!("noise.sigma must be finite and >= 0 (got {})", self.sigma));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.problems();
        if p.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(p))
        }
    }

    pub fn hurst(&self) -> f64 {
        1.0 - self.alpha / 2.0
    }

    /// `ψ₂` norm bound of one innovation.
    pub fn subgaussian_norm(&self) -> f64 {
        match self.kind {
            NoiseKind::GaussianFgn => (8.0f64 / 3.0).sqrt(),
            NoiseKind::SubgaussianRademacher => 1.0 / 2f64.ln().sqrt(),
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("alpha", format!("must lie in (0, 1], got {alpha}")))
    }
}

/// Unit-variance fGn autocovariance `r(0..lags)`.
pub fn fgn_autocovariance(lags: usize, alpha: f64) -> Vec<f64> {
    let two_h = 2.0 - alpha;
    (0..lags)
        .map(|k| {
            let k = k as f64;
            0.5 * ((k + 1.0).powf(two_h) - 2.0 * k.powf(two_h) + (k - 1.0).abs().powf(two_h))
        })
        .collect()
}

/// Toeplitz covariance `σ² r(|i - j|)` of `n` consecutive fGn values.
pub fn lrd_covariance(n: usize, alpha: f64, sigma: f64) -> Result<DMatrix<f64>> {
    check_alpha(alpha)?;
    if n < 2 {
        return Err(Error::invalid("n", format!("need n >= 2, got {n}")));
    }
    let r = fgn_autocovariance(n, alpha);
    let s2 = sigma * sigma;
    Ok(DMatrix::from_fn(n, n, |i, j| s2 * r[i.abs_diff(j)]))
}

enum Factor {
    White,
    Cholesky(DMatrix<f64>),
    Circulant {
        root_eigs: Vec<f64>,
        forward: Arc<dyn Fft<f64>>,
        inverse: Arc<dyn Fft<f64>>,
    },
}

/// Draws unit-scale error vectors `A_N η` for one profile length.
pub struct NoiseSampler {
    n: usize,
    kind: NoiseKind,
    factor: Factor,
}

impl std::fmt::Debug for NoiseSampler {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let method = match self.factor {
            Factor::White => "white",
            Factor::Cholesky(_) => "cholesky",
            Factor::Circulant { .. } => "circulant",
        };
        f.debug_struct("NoiseSampler")
            .field("n", &self.n)
            .field("kind", &self.kind)
            .field("method", &method)
            .finish()
    }
}

impl NoiseSampler {
    pub fn new(spec: &NoiseSpec, n: usize) -> Result<Self> {
        check_alpha(spec.alpha)?;
        let method = match spec.factorization {
            Factorization::Auto if spec.alpha == 1.0 => None,
            Factorization::Auto if n <= CHOLESKY_LIMIT => Some(Factorization::Cholesky),
            Factorization::Auto => Some(Factorization::Circulant),
            other => Some(other),
        };
        let factor = match method {
            None => Factor::White,
            Some(Factorization::Cholesky) => {
                let cov = lrd_covariance(n.max(2), spec.alpha, 1.0)?;
                let chol = cov.cholesky().ok_or(Error::NotPositiveDefinite { n })?;
                Factor::Cholesky(chol.unpack())
            }
            Some(_) => Self::circulant(n, spec.alpha)?,
        };
        Ok(Self {
            n,
            kind: spec.kind,
            factor,
        })
    }

    fn circulant(n: usize, alpha: f64) -> Result<Factor> {
        let r = fgn_autocovariance(n + 1, alpha);
        let size = 2 * n;
        let mut row: Vec<Complex64> = (0..size)
            .map(|k| Complex64::new(r[k.min(size - k)], 0.0))
            .collect();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(size);
        let inverse = planner.plan_fft_inverse(size);
        forward.process(&mut row);
        let tol = 1e-10 * row[0].re.abs().max(1.0);
        let mut root_eigs = Vec::with_capacity(size);
        for c in row {
            if c.re < -tol {
                return Err(Error::NotPositiveDefinite { n });
            }
            root_eigs.push(c.re.max(0.0).sqrt() / size as f64);
        }
        Ok(Factor::Circulant {
            root_eigs,
            forward,
            inverse,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn innovation(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self.kind {
            NoiseKind::GaussianFgn => rng.sample(StandardNormal),
            NoiseKind::SubgaussianRademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }

    /// Innovation stream for profile `l`.
    pub fn profile_rng(seed: u64, l: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(l as u64);
        rng
    }

    pub fn sample_profile(&self, seed: u64, l: usize) -> Vec<f64> {
        let mut rng = Self::profile_rng(seed, l);
        match &self.factor {
            Factor::White => (0..self.n).map(|_| self.innovation(&mut rng)).collect(),
            Factor::Cholesky(lower) => {
                let eta: Vec<f64> = (0..self.n).map(|_| self.innovation(&mut rng)).collect();
                (lower * nalgebra::DVector::from_vec(eta)).data.into()
            }
            Factor::Circulant {
                root_eigs,
                forward,
                inverse,
            } => {
                let mut buf: Vec<Complex64> = (0..2 * self.n)
                    .map(|_| Complex64::new(self.innovation(&mut rng), 0.0))
                    .collect();
                forward.process(&mut buf);
                buf.iter_mut().zip(root_eigs).for_each(|(c, s)| *c *= s);
                inverse.process(&mut buf);
                buf[..self.n].iter().map(|c| c.re).collect()
            }
        }
    }

    /// Errors for `m` profiles as an `n × m` matrix, column `l` from substream `l`.
    pub fn sample(&self, seed: u64, m: usize) -> DMatrix<f64> {
        match &self.factor {
            Factor::Cholesky(lower) => {
                let mut eta = DMatrix::zeros(self.n, m);
                for l in 0..m {
                    let mut rng = Self::profile_rng(seed, l);
                    for v in eta.column_mut(l).iter_mut() {
                        *v = self.innovation(&mut rng);
                    }
                }
                lower * eta
            }
            _ => {
                let mut out = DMatrix::zeros(self.n, m);
                for l in 0..m {
                    out.column_mut(l)
                        .copy_from_slice(&self.sample_profile(seed, l));
                }
                out
            }
        }
    }
}

/// `m` independent unit-scale error vectors of length `n`.
pub fn sample_errors(spec: &NoiseSpec, n: usize, m: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let sampler = NoiseSampler::new(spec, n)?;
    Ok((0..m).map(|l| sampler.sample_profile(seed, l)).collect())
}

/// Extreme eigenvalues of the unit-scale covariance.
pub fn covariance_extremes(n: usize, alpha: f64) -> Result<(f64, f64)> {
    let eig = lrd_covariance(n, alpha, 1.0)?.symmetric_eigenvalues();
    let lo = eig.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn white_noise_covariance_is_identity() {
        let c = lrd_covariance(8, 1.0, 1.0).unwrap();
        assert_eq!(c, DMatrix::identity(8, 8));
    }

    #[test]
    fn covariance_scales_with_sigma_squared() {
        let a = lrd_covariance(16, 0.6, 1.0).unwrap();
        let b = lrd_covariance(16, 0.6, 2.0).unwrap();
        assert!((b - a * 4.0).abs().max() < 1e-14);
    }

    #[test]
    fn top_eigenvalue_scaling() {
        let (_, a) = covariance_extremes(256, 0.5).unwrap();
        let (_, b) = covariance_extremes(512, 0.5).unwrap();
        let ratio = (a / 256f64.sqrt()) / (b / 512f64.sqrt());
        assert!(ratio > 0.5 && ratio < 2.0);
    }

    #[test]
    fn rejects_bad_alpha() {
        assert!(lrd_covariance(8, 0.0, 1.0).is_err());
        assert!(lrd_covariance(8, 1.2, 1.0).is_err());
    }

    #[test]
    fn rademacher_innovations_are_signs() {
        let spec = NoiseSpec {
            kind: NoiseKind::SubgaussianRademacher,
            ..NoiseSpec::default()
        };
        let e = sample_errors(&spec, 64, 3, 5).unwrap();
        assert!(e.iter().flatten().all(|v| v.abs() == 1.0));
    }

    #[test]
    fn reproducible_and_profile_independent() {
        let spec = NoiseSpec {
            alpha: 0.7,
            ..NoiseSpec::default()
        };
        let s = NoiseSampler::new(&spec, 32).unwrap();
        assert_eq!(s.sample_profile(9, 2), s.sample_profile(9, 2));
        assert_ne!(s.sample_profile(9, 1), s.sample_profile(9, 2));
        let batch = s.sample(9, 3);
        let single = s.sample_profile(9, 2);
        for i in 0..32 {
            assert!((batch[(i, 2)] - single[i]).abs() < 1e-12);
        }
    }

    fn empirical_covariance(sampler: &NoiseSampler, reps: u64) -> DMatrix<f64> {
        let n = sampler.len();
        let mut acc = DMatrix::zeros(n, n);
        for r in 0..reps {
            let e = nalgebra::DVector::from_vec(sampler.sample_profile(r, 0));
            acc += &e * e.transpose();
        }
        acc / reps as f64
    }

    #[test]
    fn both_factorizations_reproduce_the_covariance() {
        let n = 128;
        let target = lrd_covariance(n, 0.8, 1.0).unwrap();
        for factorization in [Factorization::Cholesky, Factorization::Circulant] {
            for kind in [NoiseKind::GaussianFgn, NoiseKind::SubgaussianRademacher] {
                let spec = NoiseSpec {
                    alpha: 0.8,
                    kind,
                    factorization,
                    ..NoiseSpec::default()
                };
                let sampler = NoiseSampler::new(&spec, n).unwrap();
                let reps = 2000;
                let emp = empirical_covariance(&sampler, reps);
                for i in (0..n).step_by(7) {
                    for j in (0..n).step_by(5) {
                        // Var(e_i e_j) <= Σ_ii Σ_jj + Σ_ij² for Gaussian; the Rademacher case is smaller
                        let se = ((target[(i, i)] * target[(j, j)] + target[(i, j)].powi(2)) / reps as f64).sqrt();
                        assert!(
                            (emp[(i, j)] - target[(i, j)]).abs() <= 5.0 * se,
                            "{factorization:?}/{kind:?} ({i},{j})"
                        );
                    }
                }
            }
        }
    }
}

use super::index::Index;
use crate::error::{Error, Result};
use crate::model::{DesignDensity, NoiseKind, NoiseSpec};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimatorConfig {
    /// Gaussian threshold constant.
    pub gamma: f64,
    /// Sub-Gaussian threshold constant.
    pub mu: f64,
    pub kind: NoiseKind,
    pub sigma: f64,
    pub alpha: f64,
    /// Besov radius used when choosing the finest levels.
    pub radius: f64,
    /// Fixed number of time levels; chosen from the data size when absent.
    pub j1: Option<u32>,
    pub j2: Option<u32>,
    /// Optional cap on `|m|` in the inversion sums.
    pub band_limit: Option<usize>,
    /// Lower bound applied to `|k - k0|` in the thresholds.
    pub singularity_floor: f64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            gamma: 4.0,
            mu: 4.0,
            kind: NoiseKind::GaussianFgn,
            sigma: 1.0,
            alpha: 1.0,
            radius: 1.0,
            j1: None,
            j2: None,
            band_limit: None,
            singularity_floor: 1.0,
        }
    }
}

impl EstimatorConfig {
    pub fn for_noise(noise: &NoiseSpec) -> Self {
        Self {
            kind: noise.kind,
            sigma: noise.sigma,
            alpha: noise.alpha,
            ..Self::default()
        }
    }

    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.gamma > 0.0) || !(self.mu > 0.0) {
            out.push(format!("estimator.gamma and mu must be positive (got {}, {})", self.gamma, self.mu));
        }
        if !(self.sigma >= 0.0) {
            out.push(format!("estimator.sigma must be >= 0 (got {})", self.sigma));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            out.push(format!("estimator.alpha must lie in (0, 1] (got {})", self.alpha));
        }
        if !(self.radius > 0.0) {
            out.push(format!("estimator.radius must be positive (got {})", self.radius));
        }
        if !(self.singularity_floor > 0.0) {
            out.push("estimator.singularity_floor must be positive".into());
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
}

/// Effective sample size `M N^α`.
pub fn effective_size(m: usize, n: usize, alpha: f64) -> f64 {
    m as f64 * (n as f64).powf(alpha)
}

fn floor_log2(v: usize) -> u32 {
    usize::BITS - 1 - v.leading_zeros()
}

/// Finest levels `(J1, J2)` from the signal-to-noise ratio, capped by the sample sizes.
pub fn choose_levels(m: usize, n: usize, alpha: f64, sigma: f64, radius: f64, nu: f64) -> (u32, u32) {
    let cap1 = floor_log2(n.max(2)) - 1;
    let cap2 = floor_log2(m.max(2)) - 1;
    if sigma == 0.0 {
        return (cap1, cap2);
    }
    let snr = (radius * radius * effective_size(m, n, alpha) / (sigma * sigma)).log2();
    let raw = |v: f64| if v <= 0.0 { 0 } else { (v + 1e-9).floor() as u32 };
    (raw(snr / (2.0 * nu + 1.0)).min(cap1), raw(snr).min(cap2))
}

/// Everything the level-dependent threshold needs.
#[derive(Clone, Debug)]
pub struct ThresholdRule {
    /// `γ² ln n` or `1 + μ² ln n`.
    pub log_factor: f64,
    pub sigma: f64,
    pub nu: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub t0: f64,
    pub x0: f64,
    pub n_eff: f64,
    pub floor: f64,
}

impl ThresholdRule {
    pub fn new(
        cfg: &EstimatorConfig,
        nu: f64,
        design_t: &DesignDensity,
        design_x: &DesignDensity,
        m: usize,
        n: usize,
    ) -> Self {
        let n_eff = effective_size(m, n, cfg.alpha);
        let log_factor = match cfg.kind {
            NoiseKind::GaussianFgn => cfg.gamma * cfg.gamma * n_eff.ln(),
            NoiseKind::SubgaussianRademacher => 1.0 + cfg.mu * cfg.mu * n_eff.ln(),
        };
        Self {
            log_factor,
            sigma: cfg.sigma,
            nu,
            beta1: design_t.beta,
            beta2: design_x.beta,
            t0: design_t.singularity,
            x0: design_x.singularity,
            n_eff,
            floor: cfg.singularity_floor,
        }
    }

    fn distance(&self, k: usize, center: f64, j: u32) -> f64 {
        let k0 = (center * (1u64 << j) as f64).round();
        (k as f64 - k0).abs().max(self.floor)
    }

    pub fn lambda(&self, w: &Index) -> f64 {
        let growth = ((2.0 * self.nu + self.beta1) * w.j1 as f64 + self.beta2 * w.j2 as f64).exp2();
        let damping = self.distance(w.k1, self.t0, w.j1).powf(self.beta1) * self.distance(w.k2, self.x0, w.j2).powf(self.beta2);
        (self.log_factor * self.sigma * self.sigma * growth / (damping * self.n_eff)).sqrt()
    }
}

/// `λ(ω)` for a single index.
pub fn threshold(
    w: &Index,
    cfg: &EstimatorConfig,
    nu: f64,
    design_t: &DesignDensity,
    design_x: &DesignDensity,
    m: usize,
    n: usize,
) -> f64 {
    ThresholdRule::new(cfg, nu, design_t, design_x, m, n).lambda(w)
}

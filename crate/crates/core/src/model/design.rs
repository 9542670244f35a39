//! Deterministic irregular designs: quantiles of `h(x) = c |x - x0|^β` on [0, 1].

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DesignDensity {
    /// Exponent of the zero at the singularity; 0 gives the uniform density.
    pub beta: f64,
    /// Location of the zero, strictly inside (0, 1).
    pub singularity: f64,
}

impl Default for DesignDensity {
    fn default() -> Self {
        Self::uniform()
    }
}

impl DesignDensity {
    pub fn uniform() -> Self {
        Self {
            beta: 0.0,
            singularity: 0.5,
        }
    }

    pub fn new(beta: f64, singularity: f64) -> Result<Self> {
        let d = Self { beta, singularity };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.beta.is_finite() || self.beta < 0.0 {
            return Err(Error::invalid("beta", format!("must be in [0, 1), got {}", self.beta)));
        }
        if self.beta >= 1.0 {
            return Err(Error::NonIntegrableReciprocal { beta: self.beta });
        }
        if !(self.singularity > 0.0 && self.singularity < 1.0) {
            return Err(Error::invalid(
                "singularity",
                format!("must lie in (0, 1), got {}", self.singularity),
            ));
        }
        Ok(())
    }

    pub fn is_uniform(&self) -> bool {
        self.beta == 0.0
    }

    pub fn normalization(&self) -> f64 {
        let (b, x0) = (self.beta, self.singularity);
        (b + 1.0) / (x0.powf(b + 1.0) + (1.0 - x0).powf(b + 1.0))
    }

    pub fn density(&self, x: f64) -> f64 {
        if self.is_uniform() {
            return 1.0;
        }
        self.normalization() * (x - self.singularity).abs().powf(self.beta)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        let (b1, x0) = (self.beta + 1.0, self.singularity);
        let scale = self.normalization() / b1;
        if x <= x0 {
            scale * (x0.powf(b1) - (x0 - x).powf(b1))
        } else {
            scale * (x0.powf(b1) + (x - x0).powf(b1))
        }
    }

    pub fn quantile(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        let (b1, x0) = (self.beta + 1.0, self.singularity);
        let c = self.normalization();
        let left = x0.powf(b1);
        let level = u * b1 / c;
        if level <= left {
            x0 - (left - level).max(0.0).powf(1.0 / b1)
        } else {
            x0 + (level - left).powf(1.0 / b1)
        }
    }

    /// `∫₀¹ 1/h`.
    pub fn reciprocal_integral(&self) -> f64 {
        let (b, x0) = (self.beta, self.singularity);
        let one_minus = 1.0 - b;
        (x0.powf(one_minus) + (1.0 - x0).powf(one_minus)) / (self.normalization() * one_minus)
    }

    /// Constants with `c_lo |x - x0|^β <= h(x) <= c_hi |x - x0|^β`; both equal the normalization.
    pub fn bound_constants(&self) -> (f64, f64) {
        let c = self.normalization();
        (c, c)
    }

    /// Integer shift nearest to the singularity at resolution `j`.
    pub fn singular_shift(&self, j: u32) -> i64 {
        (self.singularity * (1u64 << j) as f64).round() as i64
    }
}

pub fn normalize_density(beta: f64, singularity: f64) -> Result<f64> {
    Ok(DesignDensity::new(beta, singularity)?.normalization())
}

/// Points with `H(t_i) = (i - 1/2) / n`, strictly increasing inside (0, 1).
pub fn quantile_design(n: usize, density: &DesignDensity) -> Result<Vec<f64>> {
    density.validate()?;
    if n < 2 {
        return Err(Error::invalid("n", format!("need at least 2 design points, got {n}")));
    }
    let mut points: Vec<f64> = (1..=n)
        .map(|i| density.quantile((i as f64 - 0.5) / n as f64))
        .collect();
    for i in 0..n {
        if !density.is_uniform() && points[i] == density.singularity {
            points[i] = points[i].next_up();
        }
        if i > 0 && points[i] <= points[i - 1] {
            points[i] = points[i - 1].next_up();
        }
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_examples() {
        assert_eq!(normalize_density(0.0, 0.5).unwrap(), 1.0);
        let c = normalize_density(0.5, 0.5).unwrap();
        assert!((c - 1.5 / (2.0 * 0.5f64.powf(1.5))).abs() < 1e-12);
        assert!((c - 2.1213).abs() < 1e-4);
        let a = normalize_density(0.3, 0.2).unwrap();
        let b = normalize_density(0.3, 0.8).unwrap();
        assert!((a - b).abs() < 1e-15);
        assert!(matches!(
            normalize_density(1.0, 0.5),
            Err(Error::NonIntegrableReciprocal { .. })
        ));
    }

    #[test]
    fn density_integrates_to_one() {
        let d = DesignDensity::new(0.6, 0.3).unwrap();
        assert!((d.cdf(1.0) - 1.0).abs() < 1e-12);
        assert_eq!(d.cdf(0.0), 0.0);
        assert_eq!(d.density(0.3), 0.0);
    }

    #[test]
    fn quantile_inverts_cdf() {
        let d = DesignDensity::new(0.5, 0.5).unwrap();
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if d.cdf(mid) < 0.25 {
                lo = mid
            } else {
                hi = mid
            }
        }
        assert!((d.quantile(0.25) - lo).abs() < 1e-10);
        assert!((lo - 0.185).abs() < 1e-3);
    }

    #[test]
    fn uniform_and_symmetric_designs() {
        let u = quantile_design(4, &DesignDensity::uniform()).unwrap();
        assert_eq!(u, vec![0.125, 0.375, 0.625, 0.875]);
        let d = DesignDensity::new(0.5, 0.5).unwrap();
        let p = quantile_design(64, &d).unwrap();
        for i in 0..32 {
            assert!((p[i] + p[63 - i] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn odd_design_avoids_the_singularity() {
        let d = DesignDensity::new(0.5, 0.5).unwrap();
        let p = quantile_design(65, &d).unwrap();
        assert!(p.iter().all(|&x| x > 0.0 && x < 1.0 && d.density(x) > 0.0));
        assert!(p.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn reciprocal_integral_matches_quadrature() {
        let d = DesignDensity::new(0.4, 0.35).unwrap();
        // substitution x = x0 ± u^{1/(1-β)} removes the singularity
        let n = 200_000;
        let p = 1.0 / (1.0 - d.beta);
        let side = |len: f64| {
            let top = len.powf(1.0 - d.beta);
            (0..n)
                .map(|i| {
                    let u = (i as f64 + 0.5) / n as f64 * top;
                    let x = u.powf(p);
                    p * u.powf(p - 1.0) / (d.normalization() * x.powf(d.beta))
                })
                .sum::<f64>()
                * top
                / n as f64
        };
        let q = side(d.singularity) + side(1.0 - d.singularity);
        assert!((q - d.reciprocal_integral()).abs() < 1e-6);
    }
}

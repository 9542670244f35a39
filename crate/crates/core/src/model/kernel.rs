//! Convolution kernels given by their Fourier coefficients `g(m, x) = g(m) · s(x)`.

use crate::error::{Error, Result};
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelShape {
    /// `g(m) = 1`.
    Identity,
    /// `g(m) = (1 + |m|)^{-ν}`.
    #[default]
    RegularSmooth,
    /// `g(m) = (1 + i2πm)^{-ν}`.
    Laplace,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelSpec {
    pub shape: KernelShape,
    /// Degree of ill-posedness; must be 0 for the identity shape.
    pub nu: f64,
    /// Amplitude `κ` of the profile modulation `s(x) = 1 + κ cos 2πx`, `|κ| < 1`.
    pub modulation: f64,
    /// Smoothness index of the kernel, kept as metadata.
    pub r: f64,
}

impl Default for KernelSpec {
    fn default() -> Self {
        Self {
            shape: KernelShape::RegularSmooth,
            nu: 1.0,
            modulation: 0.0,
            r: 0.0,
        }
    }
}

/// Measured constants of `K1 (|m|+1)^{-2ν} <= |g(m,x)|² <= K2 (|m|+1)^{-2ν}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelBounds {
    pub k1: f64,
    pub k2: f64,
}

impl KernelSpec {
    pub fn identity() -> Self {
        Self {
            shape: KernelShape::Identity,
            nu: 0.0,
            ..Self::default()
        }
    }

    pub fn regular_smooth(nu: f64) -> Self {
        Self {
            nu,
            ..Self::default()
        }
    }

    pub fn laplace(nu: f64) -> Self {
        Self {
            shape: KernelShape::Laplace,
            nu,
            ..Self::default()
        }
    }

    pub fn with_modulation(mut self, kappa: f64) -> Self {
        self.modulation = kappa;
        self
    }

    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self.shape {
            KernelShape::Identity if self.nu != 0.0 => {
                out.push(format!("kernel.nu must be 0 for the identity shape (got {})", self.nu))
            }
            KernelShape::RegularSmooth | KernelShape::Laplace if !(self.nu > 0.0 && self.nu.is_finite()) => {
                out.push(format!("kernel.nu must be positive (got {})", self.nu))
            }
            _ => {}
        }
        if !(self.modulation.abs() < 1.0) {
            out.push(format!("kernel.modulation must satisfy |κ| < 1 (got {})", self.modulation));
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

    pub fn is_x_dependent(&self) -> bool {
        self.modulation != 0.0
    }

    /// The profile-independent factor `g(m)`.
    pub fn coeff(&self, m: i64) -> Complex64 {
        match self.shape {
            KernelShape::Identity => Complex64::new(1.0, 0.0),
            KernelShape::RegularSmooth => Complex64::new((1.0 + m.unsigned_abs() as f64).powf(-self.nu), 0.0),
            KernelShape::Laplace => Complex64::new(1.0, 2.0 * PI * m as f64).powf(-self.nu),
        }
    }

    /// `s(x)`.
    pub fn profile_scale(&self, x: f64) -> f64 {
        1.0 + self.modulation * (2.0 * PI * x).cos()
    }

    pub fn coeff_at(&self, m: i64, x: f64) -> Complex64 {
        self.coeff(m) * self.profile_scale(x)
    }

    /// Fails if some `g(m)` with `|m| <= band` vanishes.
    pub fn check_invertible(&self, band: usize) -> Result<()> {
        for m in 0..=band as i64 {
            let g = self.coeff(m);
            if !(g.norm() > 0.0) || !g.norm().is_finite() {
                return Err(Error::KernelNotInvertible { m });
            }
        }
        Ok(())
    }

    /// Extremes of `|g(m,x)|² (|m|+1)^{2ν}` over `|m| <= band` and the probe points.
    pub fn bounds(&self, band: usize, probes: &[f64]) -> KernelBounds {
        let (mut k1, mut k2) = (f64::INFINITY, 0.0f64);
        let scales: Vec<f64> = if probes.is_empty() {
            vec![1.0]
        } else {
            probes.iter().map(|&x| self.profile_scale(x)).collect()
        };
        let (lo, hi) = scales
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(a, b), &s| (a.min(s * s), b.max(s * s)));
        for m in 0..=band as i64 {
            let v = self.coeff(m).norm_sqr() * (1.0 + m as f64).powf(2.0 * self.nu);
            k1 = k1.min(v * lo);
            k2 = k2.max(v * hi);
        }
        KernelBounds { k1, k2 }
    }
}

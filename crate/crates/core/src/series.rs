//! Real 1-periodic trigonometric series stored by their non-negative half spectrum.
//!
//! A real function on [0, 1) with Fourier coefficients `c_m = ∫ f(t) e^{-i2πmt} dt`
//! satisfies `c_{-m} = conj(c_m)`, so only `m = 0..=band` is kept.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq)]
pub struct TrigSeries {
    coeffs: Vec<Complex64>,
    lo: usize,
}

impl TrigSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let lo = coeffs
            .iter()
            .position(|c| c.re != 0.0 || c.im != 0.0)
            .unwrap_or(coeffs.len());
        Self { coeffs, lo }
    }

    pub fn zero() -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0)])
    }

    /// Largest |m| that is stored.
    pub fn band(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Smallest m ≥ 0 with a nonzero coefficient.
    pub fn lowest_nonzero(&self) -> usize {
        self.lo
    }

    pub fn half_spectrum(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, m: i64) -> Complex64 {
        let idx = m.unsigned_abs() as usize;
        match self.coeffs.get(idx) {
            Some(c) if m >= 0 => *c,
            Some(c) => c.conj(),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// `Σ_m c_m e^{i2πmt}` (real by Hermitian symmetry).
    pub fn eval(&self, t: f64) -> f64 {
        if self.lo >= self.coeffs.len() {
            return 0.0;
        }
        let mut value = 0.0;
        let start = if self.lo == 0 {
            value += self.coeffs[0].re;
            1
        } else {
            self.lo
        };
        if start >= self.coeffs.len() {
            return value;
        }
        let step = Complex64::from_polar(1.0, 2.0 * PI * t);
        let mut z = Complex64::from_polar(1.0, 2.0 * PI * t * start as f64);
        let mut acc = Complex64::new(0.0, 0.0);
        for c in &self.coeffs[start..] {
            acc += c * z;
            z *= step;
        }
        value + 2.0 * acc.re
    }

    /// Full two-sided sum; the imaginary part is round-off for a Hermitian series.
    pub fn eval_complex(&self, t: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let b = self.band() as i64;
        for m in -b..=b {
            acc += self.coeff(m) * Complex64::from_polar(1.0, 2.0 * PI * t * m as f64);
        }
        acc
    }

    pub fn eval_many(&self, points: &[f64]) -> Vec<f64> {
        points.iter().map(|&t| self.eval(t)).collect()
    }

    /// `Σ_m |c_m|²`, the squared L² norm on [0, 1].
    pub fn energy(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| if m == 0 { c.norm_sqr() } else { 2.0 * c.norm_sqr() })
            .sum()
    }

    /// L² inner product on [0, 1].
    pub fn inner(&self, other: &TrigSeries) -> f64 {
        let lo = self.lo.max(other.lo);
        let hi = self.coeffs.len().min(other.coeffs.len());
        let mut acc = 0.0;
        for m in lo..hi {
            let p = (self.coeffs[m] * other.coeffs[m].conj()).re;
            acc += if m == 0 { p } else { 2.0 * p };
        }
        acc
    }

    /// Series of `t ↦ f(t - delta)`.
    pub fn shifted(&self, delta: f64) -> TrigSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| c * Complex64::from_polar(1.0, -2.0 * PI * m as f64 * delta))
            .collect();
        TrigSeries::new(coeffs)
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(usize, Complex64) -> Complex64) -> TrigSeries {
        TrigSeries::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(m, c)| f(m, *c))
                .collect(),
        )
    }

    /// Keep only `|m| <= band`.
    pub fn truncated(&self, band: usize) -> TrigSeries {
        let end = (band + 1).min(self.coeffs.len());
        TrigSeries::new(self.coeffs[..end].to_vec())
    }

    /// Drop trailing coefficients whose magnitude is below `tol · max |c_m|`.
    pub fn trimmed(&self, tol: f64) -> TrigSeries {
        let max = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let cut = tol * max;
        let end = self
            .coeffs
            .iter()
            .rposition(|c| c.norm() > cut)
            .map_or(1, |i| i + 1);
        TrigSeries::new(self.coeffs[..end].to_vec())
    }

    /// Coefficients of the uniformly sampled function `samples[n] = f(n / G)`, `|m| < G/2`.
    pub fn from_samples(samples: &[f64]) -> TrigSeries {
        let g = samples.len();
        let mut buf: Vec<Complex64> = samples.iter().map(|&s| Complex64::new(s, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(g).process(&mut buf);
        let scale = 1.0 / g as f64;
        let half = g.div_ceil(2);
        let mut coeffs: Vec<Complex64> = buf[..half].iter().map(|c| c * scale).collect();
        coeffs[0].im = 0.0;
        TrigSeries::new(coeffs)
    }

    /// Samples `f(n / g)` for `n = 0..g`; requires `band < g / 2`.
    pub fn to_samples(&self, g: usize) -> Vec<f64> {
        assert!(self.band() < g / 2 || self.lo >= self.coeffs.len(), "band exceeds grid Nyquist");
        let mut buf = vec![Complex64::new(0.0, 0.0); g];
        for (m, c) in self.coeffs.iter().enumerate() {
            if m == 0 {
                buf[0] = Complex64::new(c.re, 0.0);
            } else {
                buf[m] = *c;
                buf[g - m] = c.conj();
            }
        }
        FftPlanner::new().plan_fft_inverse(g).process(&mut buf);
        buf.into_iter().map(|c| c.re).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_round_trip() {
        let s = TrigSeries::new(vec![
            Complex64::new(0.3, 0.0),
            Complex64::new(0.1, -0.2),
            Complex64::new(0.0, 0.05),
        ]);
        let samples = s.to_samples(32);
        for (n, v) in samples.iter().enumerate() {
            assert!((v - s.eval(n as f64 / 32.0)).abs() < 1e-13);
        }
        let back = TrigSeries::from_samples(&samples).trimmed(1e-12);
        assert_eq!(back.band(), 2);
        for m in 0..=2 {
            assert!((back.coeff(m) - s.coeff(m)).norm() < 1e-14);
        }
    }

    #[test]
    fn eval_matches_two_sided_sum() {
        let s = TrigSeries::new(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.4, 0.7),
            Complex64::new(-0.2, 0.1),
        ]);
        for &t in &[0.0, 0.13, 0.5, 0.91] {
            let full = s.eval_complex(t);
            assert!(full.im.abs() < 1e-12);
            assert!((full.re - s.eval(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn shift_moves_the_function() {
        let s = TrigSeries::new(vec![Complex64::new(0.1, 0.0), Complex64::new(0.5, 0.2)]);
        let sh = s.shifted(0.25);
        assert!((sh.eval(0.4) - s.eval(0.15)).abs() < 1e-13);
    }
}

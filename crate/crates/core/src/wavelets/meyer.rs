//! Meyer scaling function and wavelet in the Fourier domain.
//!
//! Transform convention: `Θ̂(ω) = ∫ θ(x) e^{-iωx} dx`. The periodized atom at resolution `r`
//! and shift `k` has coefficients `2^{-r/2} e^{-i2πmk/2^r} Θ̂(2πm/2^r)`.

use super::AtomKind;
use crate::series::TrigSeries;
use rustfft::num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

/// Auxiliary polynomial `v` with `v(x) + v(1 - x) = 1` on [0, 1].
fn smooth_step(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    x.powi(4) * (35.0 - 84.0 * x + 70.0 * x * x - 20.0 * x * x * x)
}

pub fn scaling_ft(omega: f64) -> f64 {
    let w = omega.abs();
    if w <= 2.0 * PI / 3.0 {
        1.0
    } else if w <= 4.0 * PI / 3.0 {
        (FRAC_PI_2 * smooth_step(3.0 * w / (2.0 * PI) - 1.0)).cos()
    } else {
        0.0
    }
}

pub fn wavelet_ft(omega: f64) -> Complex64 {
    let w = omega.abs();
    let amplitude = if w <= 2.0 * PI / 3.0 || w >= 8.0 * PI / 3.0 {
        0.0
    } else if w <= 4.0 * PI / 3.0 {
        (FRAC_PI_2 * smooth_step(3.0 * w / (2.0 * PI) - 1.0)).sin()
    } else {
        (FRAC_PI_2 * smooth_step(3.0 * w / (4.0 * PI) - 1.0)).cos()
    };
    Complex64::from_polar(amplitude, -omega / 2.0)
}

/// Largest |m| with a possibly nonzero coefficient at resolution `r`.
pub fn band(kind: AtomKind, resolution: u32) -> usize {
    let scale = 1u64 << resolution;
    match kind {
        AtomKind::Scaling => (2 * scale / 3) as usize,
        AtomKind::Wavelet => (4 * scale / 3) as usize,
    }
}

/// Half spectrum of the shift-zero periodized atom.
pub fn level_series(kind: AtomKind, resolution: u32) -> TrigSeries {
    let scale = (1u64 << resolution) as f64;
    let norm = scale.powf(-0.5);
    let coeffs = (0..=band(kind, resolution))
        .map(|m| {
            let omega = 2.0 * PI * m as f64 / scale;
            match kind {
                AtomKind::Scaling => Complex64::new(norm * scaling_ft(omega), 0.0),
                AtomKind::Wavelet => wavelet_ft(omega) * norm,
            }
        })
        .collect();
    TrigSeries::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_of_unity() {
        for i in 0..200 {
            let w = 2.0 * PI * i as f64 / 200.0;
            let s: f64 = (-3..=3)
                .map(|l| scaling_ft(w + 2.0 * PI * l as f64).powi(2))
                .sum();
            assert!((s - 1.0).abs() < 1e-12, "w = {w}: {s}");
        }
    }

    #[test]
    fn wavelet_squares_sum_to_one() {
        // Σ_l |Ψ̂(ω + 2πl)|² = 1
        for i in 1..200 {
            let w = 2.0 * PI * i as f64 / 200.0;
            let s: f64 = (-4..=4)
                .map(|l| wavelet_ft(w + 2.0 * PI * l as f64).norm_sqr())
                .sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }
}

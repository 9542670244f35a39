//! Periodized Daubechies atoms, tabulated by synthesis on the fine grid.
//!
//! The Fourier tables keep `0 <= m < G/2`; the Nyquist term and everything above it is dropped.

use super::{AtomKind, WaveletFamily};
use crate::series::TrigSeries;

#[allow(clippy::excessive_precision)]
const DB2: [f64; 4] = [
    0.48296291314453414356,
    0.83651630373780790549,
    0.22414386804201338095,
    -0.12940952255126038119,
];

#[allow(clippy::excessive_precision)]
const DB3: [f64; 6] = [
    0.3326705529500856224,
    0.8068915093110920808,
    0.45987750211848989858,
    -0.13501102001025584372,
    -0.085441273882026532648,
    0.035226291885709823386,
];

#[allow(clippy::excessive_precision)]
const DB4: [f64; 8] = [
    0.23037781330889650422,
    0.71484657055291564731,
    0.63088076792985890618,
    -0.027983769416859856679,
    -0.1870348117190930843,
    0.030841381835560764539,
    0.032883011666885199807,
    -0.010597401785069032279,
];

pub fn lowpass(family: WaveletFamily) -> &'static [f64] {
    match family {
        WaveletFamily::Db2 => &DB2,
        WaveletFamily::Db3 => &DB3,
        WaveletFamily::Db4 => &DB4,
        WaveletFamily::Meyer => unreachable!("Meyer has no finite filter"),
    }
}

fn highpass(h: &[f64]) -> Vec<f64> {
    let len = h.len();
    (0..len)
        .map(|n| if n % 2 == 0 { h[len - 1 - n] } else { -h[len - 1 - n] })
        .collect()
}

/// One periodic synthesis step: `approx`, `detail` of length `n` to a signal of length `2n`.
fn synthesize_step(approx: &[f64], detail: &[f64], h: &[f64], g: &[f64]) -> Vec<f64> {
    let n = approx.len();
    let out_len = 2 * n;
    let mut out = vec![0.0; out_len];
    for k in 0..n {
        let (a, d) = (approx[k], detail[k]);
        if a == 0.0 && d == 0.0 {
            continue;
        }
        for (tap, (&hv, &gv)) in h.iter().zip(g).enumerate() {
            out[(2 * k + tap) % out_len] += a * hv + d * gv;
        }
    }
    out
}

/// Samples `θ_{r,0}(n/G)` of the periodized atom, `n = 0..G`.
pub fn fine_samples(family: WaveletFamily, kind: AtomKind, resolution: u32, grid: usize) -> Vec<f64> {
    let h = lowpass(family);
    let g = highpass(h);
    let n = 1usize << resolution;
    let mut delta = vec![0.0; n];
    delta[0] = 1.0;
    let zeros = vec![0.0; n];
    let mut signal = match kind {
        AtomKind::Scaling => delta,
        AtomKind::Wavelet => synthesize_step(&zeros, &delta, h, &g),
    };
    while signal.len() < grid {
        let zeros = vec![0.0; signal.len()];
        signal = synthesize_step(&signal, &zeros, h, &g);
    }
    let scale = (grid as f64).sqrt();
    signal.iter_mut().for_each(|v| *v *= scale);
    signal
}

pub fn level_series(family: WaveletFamily, kind: AtomKind, resolution: u32, grid: usize) -> TrigSeries {
    let samples = fine_samples(family, kind, resolution, grid);
    let series = TrigSeries::from_samples(&samples);
    series.truncated(grid / 2 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filters_are_orthonormal() {
        for family in [WaveletFamily::Db2, WaveletFamily::Db3, WaveletFamily::Db4] {
            let h = lowpass(family);
            let sum: f64 = h.iter().sum();
            assert!((sum - 2f64.sqrt()).abs() < 1e-12);
            for shift in (0..h.len()).step_by(2) {
                let dot: f64 = h.iter().skip(shift).zip(h).map(|(a, b)| a * b).sum();
                let expected = if shift == 0 { 1.0 } else { 0.0 };
                assert!((dot - expected).abs() < 1e-12, "{family:?} shift {shift}");
            }
        }
    }

    #[test]
    fn wavelet_has_vanishing_mean_and_unit_norm() {
        let s = fine_samples(WaveletFamily::Db3, AtomKind::Wavelet, 4, 4096);
        let mean: f64 = s.iter().sum::<f64>() / 4096.0;
        let norm: f64 = s.iter().map(|v| v * v).sum::<f64>() / 4096.0;
        assert!(mean.abs() < 1e-12);
        assert!((norm - 1.0).abs() < 1e-12);
    }
}

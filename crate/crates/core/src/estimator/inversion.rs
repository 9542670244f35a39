//! Inversion functions `U_ω(t, x)`: basis atoms with the kernel divided out in frequency.

use super::index::Index;
use crate::error::{Error, Result};
use crate::model::KernelSpec;
use crate::wavelets::{build_level, Axis, Basis1d, LevelBasis, WaveletSpec};
use nalgebra::{DMatrix, DVector};
use rustfft::num_complex::Complex64;

/// `Σ_m θ̂(m) / conj(g(m)) e^{i2πmt}` for every shift of the level.
pub fn deconvolved_level(level: &LevelBasis, kernel: &KernelSpec, band_limit: Option<usize>) -> Result<LevelBasis> {
    let band = level.mother().band().min(band_limit.unwrap_or(usize::MAX));
    kernel.check_invertible(band)?;
    Ok(level.map_mother(|m, c| {
        if m > band {
            Complex64::new(0.0, 0.0)
        } else {
            c / kernel.coeff(m as i64).conj()
        }
    }))
}

pub fn deconvolved_basis(basis: &Basis1d, kernel: &KernelSpec, band_limit: Option<usize>) -> Result<Basis1d> {
    let mut failure = None;
    let out = basis.map_levels(|level| match deconvolved_level(level, kernel, band_limit) {
        Ok(l) => l,
        Err(e) => {
            failure.get_or_insert(e);
            level.clone()
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// `U_ω(t_i, x_l)` as an `N × M` matrix.
pub fn compute_u(
    w: &Index,
    kernel: &KernelSpec,
    wavelet: &WaveletSpec,
    t: &[f64],
    x: &[f64],
    band_limit: Option<usize>,
) -> Result<DMatrix<f64>> {
    let time = build_level(wavelet, Axis::Time, w.j1)?;
    let space = build_level(wavelet, Axis::Space, w.j2)?;
    if w.k1 >= time.shifts() || w.k2 >= space.shifts() {
        return Err(Error::invalid("index", format!("shift out of range in {w}")));
    }
    let u = deconvolved_level(&time, kernel, band_limit)?.series(w.k1);
    let eta = space.series(w.k2);
    let tv = DVector::from_vec(u.eval_many(t));
    let xv = DVector::from_iterator(x.len(), x.iter().map(|&v| eta.eval(v) / kernel.profile_scale(v)));
    Ok(tv * xv.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn points(n: usize) -> Vec<f64> {
        (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect()
    }

    #[test]
    fn identity_kernel_gives_the_atom() {
        let spec = WaveletSpec::default();
        let w = Index::new(4, 3, 3, 5);
        let (t, x) = (points(40), points(24));
        let u = compute_u(&w, &KernelSpec::identity(), &spec, &t, &x, None).unwrap();
        let psi = build_level(&spec, Axis::Time, 4).unwrap();
        let eta = build_level(&spec, Axis::Space, 3).unwrap();
        for (i, &tv) in t.iter().enumerate() {
            for (l, &xv) in x.iter().enumerate() {
                assert!((u[(i, l)] - psi.eval(3, tv) * eta.eval(5, xv)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn shift_in_k_is_a_translation() {
        let spec = WaveletSpec::default();
        let kernel = KernelSpec::laplace(1.0);
        let t = [0.1, 0.33, 0.71];
        let shifted: Vec<f64> = t.iter().map(|v| v + 1.0 / 16.0).collect();
        let a = compute_u(&Index::new(4, 2, 2, 1), &kernel, &spec, &t, &[0.4], None).unwrap();
        let b = compute_u(&Index::new(4, 3, 2, 1), &kernel, &spec, &shifted, &[0.4], None).unwrap();
        assert!((a - b).abs().max() < 1e-10);
    }

    #[test]
    fn the_kernel_is_undone_in_the_inner_product() {
        // ∫ U (g * f) = ⟨f, ψ⟩ for any f; here f is the atom itself
        let spec = WaveletSpec::default();
        let kernel = KernelSpec::laplace(1.5);
        let level = build_level(&spec, Axis::Time, 5).unwrap();
        let u = deconvolved_level(&level, &kernel, None).unwrap().series(7);
        let blurred = level.series(7).map_coeffs(|m, c| c * kernel.coeff(m as i64));
        assert!((u.inner(&blurred) - 1.0).abs() < 1e-12);
    }
}

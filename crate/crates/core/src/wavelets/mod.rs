//! Periodized wavelet bases on [0, 1) described by exact Fourier coefficient tables.
//!
//! Levels are addressed by an *index level* `j`. The coarsest index level `m0 - 1` holds the
//! scaling functions `φ_{m0,k}`, `k = 0..2^{m0}`; every index level `j >= m0` holds the
//! wavelets `ψ_{j,k}`, `k = 0..2^j`. A basis truncated below index level `J` therefore has
//! exactly `2^J` elements.

mod daubechies;
mod meyer;

use crate::error::{Error, Result};
use crate::series::TrigSeries;
use nalgebra::DMatrix;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub use meyer::{scaling_ft as meyer_scaling_ft, wavelet_ft as meyer_wavelet_ft};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WaveletFamily {
    #[default]
    Meyer,
    Db2,
    Db3,
    Db4,
}

impl WaveletFamily {
    /// Hölder regularity of the mother wavelet.
    pub fn regularity(self) -> f64 {
        match self {
            WaveletFamily::Meyer => f64::INFINITY,
            WaveletFamily::Db2 => 0.55,
            WaveletFamily::Db3 => 1.08,
            WaveletFamily::Db4 => 1.62,
        }
    }

    pub fn is_band_limited(self) -> bool {
        self == WaveletFamily::Meyer
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AtomKind {
    Scaling,
    Wavelet,
}

/// Which coordinate a basis lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Time,
    Space,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WaveletSpec {
    pub family: WaveletFamily,
    /// Coarsest resolution in the time direction.
    pub m10: u32,
    /// Coarsest resolution in the space direction.
    pub m20: u32,
    /// Fine grid size used for tabulation and quadrature.
    pub grid: usize,
}

impl Default for WaveletSpec {
    fn default() -> Self {
        Self {
            family: WaveletFamily::Meyer,
            m10: 3,
            m20: 3,
            grid: 1 << 14,
        }
    }
}

impl WaveletSpec {
    pub fn coarsest(&self, axis: Axis) -> u32 {
        match axis {
            Axis::Time => self.m10,
            Axis::Space => self.m20,
        }
    }

    pub fn regularity(&self) -> f64 {
        self.family.regularity()
    }

    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.m10 < 2 || self.m20 < 2 {
            out.push(format!("wavelet.m10/m20 must be >= 2 (got {}, {})", self.m10, self.m20));
        }
        if !self.grid.is_power_of_two() || self.grid < 64 {
            out.push(format!("wavelet.grid must be a power of two >= 64 (got {})", self.grid));
        } else {
            let cap = 1usize << (self.m10.max(self.m20) + 2);
            if cap > self.grid {
                out.push(format!("wavelet.grid {} too small for the coarsest levels", self.grid));
            }
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

    /// Checks that the family is smoother than the kernel's ill-posedness requires.
    pub fn check_regularity(&self, needed: f64) -> Result<()> {
        if self.regularity() > needed {
            Ok(())
        } else {
            Err(Error::invalid(
                "wavelet.family",
                format!(
                    "regularity {} of {:?} does not exceed {needed}",
                    self.regularity(),
                    self.family
                ),
            ))
        }
    }
}

/// Fourier coefficients `θ̂_{j,k}(m)` of one periodized atom.
#[derive(Clone, Debug)]
pub struct FourierCoeffTable {
    pub level: u32,
    pub shift: usize,
    pub kind: AtomKind,
    pub series: TrigSeries,
}

impl FourierCoeffTable {
    pub fn coeff(&self, m: i64) -> Complex64 {
        self.series.coeff(m)
    }

    pub fn band(&self) -> usize {
        self.series.band()
    }

    /// `Σ_m |θ̂(m)|²` over both signs of `m`.
    pub fn parseval_sum(&self) -> f64 {
        self.series.energy()
    }
}

/// `Σ_m θ̂(m) e^{i2πmt}` at each point.
pub fn eval_on_points(table: &FourierCoeffTable, points: &[f64]) -> Vec<f64> {
    table.series.eval_many(points)
}

/// All shifts of one atom type at one resolution, stored through the shift-zero series.
#[derive(Clone, Debug)]
pub struct LevelBasis {
    index_level: u32,
    resolution: u32,
    kind: AtomKind,
    mother: TrigSeries,
}

impl LevelBasis {
    pub fn new(family: WaveletFamily, kind: AtomKind, resolution: u32, grid: usize) -> Result<Self> {
        if (1usize << resolution) > grid / 4 {
            return Err(Error::ResolutionOverflow {
                level: resolution,
                grid,
            });
        }
        let mother = match family {
            WaveletFamily::Meyer => meyer::level_series(kind, resolution),
            _ => daubechies::level_series(family, kind, resolution, grid),
        };
        let index_level = match kind {
            AtomKind::Scaling => resolution.saturating_sub(1),
            AtomKind::Wavelet => resolution,
        };
        Ok(Self {
            index_level,
            resolution,
            kind,
            mother,
        })
    }

    pub fn index_level(&self) -> u32 {
        self.index_level
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn kind(&self) -> AtomKind {
        self.kind
    }

    pub fn shifts(&self) -> usize {
        1 << self.resolution
    }

    pub fn mother(&self) -> &TrigSeries {
        &self.mother
    }

    fn offset(&self, k: usize) -> f64 {
        k as f64 / self.shifts() as f64
    }

    pub fn series(&self, k: usize) -> TrigSeries {
        self.mother.shifted(self.offset(k))
    }

    pub fn table(&self, k: usize) -> FourierCoeffTable {
        FourierCoeffTable {
            level: self.index_level,
            shift: k,
            kind: self.kind,
            series: self.series(k),
        }
    }

    pub fn eval(&self, k: usize, t: f64) -> f64 {
        self.mother.eval(t - self.offset(k))
    }

    /// Rows are shifts, columns are points.
    pub fn eval_matrix(&self, points: &[f64]) -> DMatrix<f64> {
        // θ_k(t) = Σ_q e^{-i2πqk/S} Σ_{m ≡ q (mod S)} c_m e^{i2πmt}, one length-S FFT per point
        let size = self.shifts();
        let fft = FftPlanner::new().plan_fft_forward(size);
        let coeffs = self.mother.half_spectrum();
        let lo = self.mother.lowest_nonzero();
        let mut out = DMatrix::zeros(size, points.len());
        let mut buf = vec![Complex64::new(0.0, 0.0); size];
        for (col, &t) in points.iter().enumerate() {
            buf.iter_mut().for_each(|b| *b = Complex64::new(0.0, 0.0));
            let step = Complex64::from_polar(1.0, 2.0 * PI * t);
            let mut z = Complex64::from_polar(1.0, 2.0 * PI * t * lo as f64);
            for (m, c) in coeffs.iter().enumerate().skip(lo) {
                let term = c * z;
                if m == 0 {
                    buf[0] += term;
                } else {
                    buf[m % size] += term;
                    buf[(size - m % size) % size] += term.conj();
                }
                z *= step;
            }
            fft.process(&mut buf);
            for (k, v) in buf.iter().enumerate() {
                out[(k, col)] = v.re;
            }
        }
        out
    }

    /// Fine-grid samples `θ_{j,k}(n / g)`.
    pub fn fine_samples(&self, k: usize, g: usize) -> Vec<f64> {
        self.series(k).to_samples(g)
    }

    /// `⟨f, θ_{j,k}⟩` for every shift `k`.
    pub fn project(&self, f: &TrigSeries) -> Vec<f64> {
        let products = f.truncated(self.mother.band()).map_coeffs(|m, c| c * self.mother.coeff(m as i64).conj());
        (0..self.shifts())
            .map(|k| products.eval(self.offset(k)))
            .collect()
    }

    /// The same level with every mother coefficient transformed by `op(m, c)`.
    pub fn map_mother(&self, op: impl FnMut(usize, Complex64) -> Complex64) -> LevelBasis {
        LevelBasis {
            mother: self.mother.map_coeffs(op),
            ..self.clone()
        }
    }
}

/// The atoms stored at index level `j` on the given axis.
pub fn build_level(spec: &WaveletSpec, axis: Axis, j: u32) -> Result<LevelBasis> {
    let m0 = spec.coarsest(axis);
    if j + 1 < m0 {
        return Err(Error::invalid(
            "level",
            format!("index level {j} is below the scaling level {}", m0 - 1),
        ));
    }
    let (kind, resolution) = if j + 1 == m0 {
        (AtomKind::Scaling, m0)
    } else {
        (AtomKind::Wavelet, j)
    };
    LevelBasis::new(spec.family, kind, resolution, spec.grid).map_err(|e| match e {
        Error::ResolutionOverflow { grid, .. } => Error::ResolutionOverflow { level: j, grid },
        other => other,
    })
}

/// Fourier tables for all shifts at index level `j`.
pub fn build_basis(spec: &WaveletSpec, axis: Axis, j: u32) -> Result<Vec<FourierCoeffTable>> {
    let level = build_level(spec, axis, j)?;
    Ok((0..level.shifts()).map(|k| level.table(k)).collect())
}

/// A complete one-dimensional basis truncated below index level `top`.
#[derive(Clone, Debug)]
pub struct Basis1d {
    coarsest: u32,
    levels: Vec<LevelBasis>,
}

impl Basis1d {
    pub fn new(spec: &WaveletSpec, axis: Axis, top: u32) -> Result<Self> {
        let coarsest = spec.coarsest(axis);
        if top < coarsest {
            return Err(Error::invalid(
                "levels",
                format!("top level {top} is below the coarsest resolution {coarsest}"),
            ));
        }
        let levels = (coarsest - 1..top)
            .map(|j| build_level(spec, axis, j))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { coarsest, levels })
    }

    /// Resolution of the scaling block.
    pub fn coarsest(&self) -> u32 {
        self.coarsest
    }

    /// One past the finest index level.
    pub fn top(&self) -> u32 {
        self.coarsest - 1 + self.levels.len() as u32
    }

    pub fn dim(&self) -> usize {
        1 << self.top()
    }

    pub fn levels(&self) -> &[LevelBasis] {
        &self.levels
    }

    pub fn level(&self, j: u32) -> &LevelBasis {
        &self.levels[(j + 1 - self.coarsest) as usize]
    }

    /// Flat position of `(j, k)`.
    pub fn position(&self, j: u32, k: usize) -> usize {
        if j + 1 == self.coarsest {
            k
        } else {
            (1 << j) + k
        }
    }

    /// Inverse of [`Basis1d::position`].
    pub fn atom(&self, p: usize) -> (u32, usize) {
        let scaling = 1usize << self.coarsest;
        if p < scaling {
            (self.coarsest - 1, p)
        } else {
            let j = usize::BITS - 1 - p.leading_zeros();
            (j, p - (1 << j))
        }
    }

    /// Rows follow flat positions, columns follow points.
    pub fn eval_matrix(&self, points: &[f64]) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.dim(), points.len());
        let mut row = 0;
        for level in &self.levels {
            let block = level.eval_matrix(points);
            out.rows_mut(row, level.shifts()).copy_from(&block);
            row += level.shifts();
        }
        out
    }

    /// Coefficients `⟨f, θ_p⟩` in flat order.
    pub fn project(&self, f: &TrigSeries) -> Vec<f64> {
        self.levels.iter().flat_map(|level| level.project(f)).collect()
    }

    /// Series of `Σ_p coeffs[p] θ_p`.
    pub fn synthesize(&self, coeffs: &[f64]) -> TrigSeries {
        let band = self.levels.iter().map(|l| l.mother.band()).max().unwrap_or(0);
        let mut acc = vec![Complex64::new(0.0, 0.0); band + 1];
        let mut p = 0;
        for level in &self.levels {
            for k in 0..level.shifts() {
                let w = coeffs[p];
                p += 1;
                if w == 0.0 {
                    continue;
                }
                let s = level.series(k);
                for (m, c) in s.half_spectrum().iter().enumerate() {
                    acc[m] += c * w;
                }
            }
        }
        TrigSeries::new(acc)
    }

    pub fn map_levels(&self, mut op: impl FnMut(&LevelBasis) -> LevelBasis) -> Basis1d {
        Basis1d {
            coarsest: self.coarsest,
            levels: self.levels.iter().map(&mut op).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> WaveletSpec {
        WaveletSpec::default()
    }

    #[test]
    fn parseval_and_modulation() {
        let tables = build_basis(&spec(), Axis::Time, 3).unwrap();
        assert_eq!(tables.len(), 8);
        assert!((tables[0].parseval_sum() - 1.0).abs() < 1e-8);
        for m in -20..=20i64 {
            let phase = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * m as f64 * 5.0 / 8.0);
            let expected = phase * tables[0].coeff(m);
            assert!((tables[5].coeff(m) - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn fine_grid_orthogonality() {
        let level = build_level(&spec(), Axis::Time, 4).unwrap();
        let g = spec().grid;
        let a = level.fine_samples(2, g);
        let b = level.fine_samples(9, g);
        let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum::<f64>() / g as f64;
        let norm: f64 = a.iter().map(|x| x * x).sum::<f64>() / g as f64;
        assert!(dot.abs() < 1e-8);
        assert!((norm - 1.0).abs() < 1e-8);
    }

    #[test]
    fn meyer_band_limit() {
        for j in 2..=8 {
            let level = build_level(&spec(), Axis::Time, j).unwrap();
            let limit = (1u64 << (j + 2)).div_ceil(3) as usize + 1;
            assert!(level.mother().band() <= limit, "j = {j}");
        }
    }

    #[test]
    fn overflow_is_reported() {
        let s = WaveletSpec {
            grid: 256,
            ..spec()
        };
        assert!(build_level(&s, Axis::Time, 6).is_ok());
        assert!(matches!(
            build_level(&s, Axis::Time, 7),
            Err(Error::ResolutionOverflow { level: 7, .. })
        ));
    }

    #[test]
    fn constant_scaling_table_is_one() {
        let level = LevelBasis::new(WaveletFamily::Meyer, AtomKind::Scaling, 0, 64).unwrap();
        let v = eval_on_points(&level.table(0), &[0.37]);
        assert!((v[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn matrix_evaluation_matches_pointwise() {
        let level = build_level(&spec(), Axis::Time, 4).unwrap();
        let pts = [0.0, 0.013, 0.4, 0.77, 0.999];
        let m = level.eval_matrix(&pts);
        for k in 0..level.shifts() {
            for (i, &t) in pts.iter().enumerate() {
                assert!((m[(k, i)] - level.eval(k, t)).abs() < 1e-12);
            }
        }
        let scaling = build_level(&spec(), Axis::Time, 2).unwrap();
        let m = scaling.eval_matrix(&pts);
        assert!((m[(3, 2)] - scaling.eval(3, 0.4)).abs() < 1e-12);
    }

    #[test]
    fn shift_evaluation() {
        let level = build_level(&spec(), Axis::Time, 5).unwrap();
        let h = 1.0 / 32.0;
        for k in [0usize, 3, 17, 31] {
            let a = level.eval(k, (k as f64 + 0.5) * h);
            let b = level.eval(0, 0.5 * h);
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn point_evaluation_matches_fine_synthesis() {
        let level = build_level(&spec(), Axis::Time, 3).unwrap();
        let g = spec().grid;
        let fine = level.fine_samples(0, g);
        let points: Vec<f64> = (0..64).map(|i| i as f64 / 64.0).collect();
        let direct = eval_on_points(&level.table(0), &points);
        for (i, v) in direct.iter().enumerate() {
            assert!((v - fine[i * g / 64]).abs() < 1e-8);
        }
    }

    #[test]
    fn full_basis_orthonormality() {
        let basis = Basis1d::new(&spec(), Axis::Time, 7).unwrap();
        assert_eq!(basis.dim(), 128);
        let g = 1024;
        let samples: Vec<Vec<f64>> = (0..basis.dim())
            .map(|p| {
                let (j, k) = basis.atom(p);
                assert_eq!(basis.position(j, k), p);
                basis.level(j).fine_samples(k, g)
            })
            .collect();
        for a in 0..basis.dim() {
            for b in a..basis.dim() {
                let dot: f64 = samples[a].iter().zip(&samples[b]).map(|(x, y)| x * y).sum::<f64>() / g as f64;
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((dot - expected).abs() < 1e-6, "({a}, {b}) -> {dot}");
            }
        }
    }

    #[test]
    fn synthesis_analysis_round_trip() {
        let basis = Basis1d::new(&spec(), Axis::Space, 6).unwrap();
        let coeffs: Vec<f64> = (0..basis.dim()).map(|p| ((p * 37 % 11) as f64 - 5.0) / 7.0).collect();
        let back = basis.project(&basis.synthesize(&coeffs));
        for (a, b) in coeffs.iter().zip(&back) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn daubechies_tables_are_nearly_orthonormal() {
        let s = WaveletSpec {
            family: WaveletFamily::Db4,
            grid: 4096,
            ..spec()
        };
        let basis = Basis1d::new(&s, Axis::Time, 5).unwrap();
        let coeffs: Vec<f64> = (0..basis.dim()).map(|p| if p == 9 { 1.0 } else { 0.0 }).collect();
        let back = basis.project(&basis.synthesize(&coeffs));
        for (p, v) in back.iter().enumerate() {
            let expected = if p == 9 { 1.0 } else { 0.0 };
            assert!((v - expected).abs() < 1e-3);
        }
    }
}
